//! Generative operations for Gorenstein graphs and their certificates.
//!
//! Base side (`B(M(G))`): seeds `C_δ` and `K4`, glueing `δ-1` graphs along
//! edges of weight `δ-1`, `(δ-1)`-subdivision of a weight-1 edge, and (for
//! `δ = 2`) collision. Independence side (`P(M(G))`): attaching
//! `(δ+1)`-cycles to an edge starting from `K2`, then an `(δ-1)`-fold
//! blow-up.
//!
//! # Replay labelling
//!
//! Certificates refer to edges by position in the replayed child graph.
//! After every step vertices are `0..n` and edges `0..m` in list order:
//!
//! * `Cycle(n)`: edges `i -- (i+1) mod n`; `K4`: `01 02 03 12 13 23`; `K2`: `01`.
//! * `Glue`: the first child's vertices and edges come first; each further
//!   child contributes its remaining vertices, then its edges without the
//!   glued one, in order. An [`EdgeRef`] is oriented `(u, v)` as stored, or
//!   `(v, u)` when `reversed`; the `u` ends are identified with each other.
//! * `Collide`: as `Glue` with two children, then the glued edge is removed.
//! * `Subdivide` / `AttachCycle`: the edge is removed (subdivide only) and a
//!   path from `u` to `v` through fresh vertices `n, n+1, ...` is appended.
//! * `BlowUp`: each edge becomes `m` consecutive copies.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::base::{check_spade, weight_function};
use crate::graph::{self, is_two_connected, EdgeId, Multigraph};
use crate::{Error, Result};

pub const CERT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertKind {
    Base,
    Indep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Seed {
    Cycle { length: u32 },
    K4,
    K2,
}

/// An edge of a replayed child, with orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRef {
    pub edge: u32,
    #[serde(default)]
    pub reversed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum CertNode {
    Seed { seed: Seed },
    Glue { children: Vec<CertNode>, edges: Vec<EdgeRef> },
    Subdivide { child: Box<CertNode>, edge: EdgeRef },
    Collide { left: Box<CertNode>, right: Box<CertNode>, edges: [EdgeRef; 2] },
    AttachCycle { child: Box<CertNode>, edge: EdgeRef, length: u32 },
    BlowUp { child: Box<CertNode>, m: u32 },
}

impl CertNode {
    pub fn depth(&self) -> usize {
        match self {
            CertNode::Seed { .. } => 0,
            CertNode::Glue { children, .. } => 1 + children.iter().map(CertNode::depth).max().unwrap_or(0),
            CertNode::Subdivide { child, .. } | CertNode::AttachCycle { child, .. } | CertNode::BlowUp { child, .. } => {
                1 + child.depth()
            }
            CertNode::Collide { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }
}

impl fmt::Display for CertNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertNode::Seed { seed } => match seed {
                Seed::Cycle { length } => write!(f, "Seed(C{length})"),
                Seed::K4 => write!(f, "Seed(K4)"),
                Seed::K2 => write!(f, "Seed(K2)"),
            },
            CertNode::Glue { children, .. } => {
                write!(f, "Glue(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            CertNode::Subdivide { child, .. } => write!(f, "Subdivide({child})"),
            CertNode::Collide { left, right, .. } => write!(f, "Collide({left}, {right})"),
            CertNode::AttachCycle { child, length, .. } => write!(f, "AttachCycle({child}, C{length})"),
            CertNode::BlowUp { child, m } => write!(f, "BlowUp({child}, {m})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionCert {
    pub schema_version: u32,
    pub kind: CertKind,
    pub delta: u32,
    pub root: CertNode,
}

impl ConstructionCert {
    pub fn new(kind: CertKind, delta: u32, root: CertNode) -> Self {
        ConstructionCert { schema_version: CERT_SCHEMA_VERSION, kind, delta, root }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: ConstructionCert = serde_json::from_str(text).map_err(|e| Error::Certificate(e.to_string()))?;
        if c.schema_version != CERT_SCHEMA_VERSION {
            return Err(Error::Certificate(format!("unsupported schema_version {}", c.schema_version)));
        }
        Ok(c)
    }
}

impl fmt::Display for ConstructionCert {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

// ---------------------------------------------------------------------------
// Raw steps on compact graphs (index labels, ids 0..m in list order).

fn compact(g: &Multigraph) -> Multigraph {
    g.with_compact_ids().with_index_labels()
}

fn seed_graph(seed: Seed) -> Result<Multigraph> {
    Ok(match seed {
        Seed::Cycle { length } if length >= 3 => Multigraph::cycle(length as usize),
        Seed::Cycle { length } => return Err(Error::Certificate(format!("cycle seed of length {length}"))),
        Seed::K4 => Multigraph::complete(4),
        Seed::K2 => Multigraph::path(2),
    })
}

fn oriented(g: &Multigraph, r: EdgeRef) -> Result<(usize, usize)> {
    let e = g
        .edges()
        .get(r.edge as usize)
        .ok_or_else(|| Error::Certificate(format!("edge {} out of range ({} edges)", r.edge, g.edge_count())))?;
    Ok(if r.reversed { (e.v, e.u) } else { (e.u, e.v) })
}

/// Identifies the referenced edges of all parts. Returns the compact result
/// and, per part, the map from its vertices to result vertices.
fn glue_raw(parts: &[(&Multigraph, EdgeRef)]) -> Result<(Multigraph, Vec<Vec<usize>>)> {
    let (first, r0) = parts[0];
    let (u0, v0) = oriented(first, r0)?;
    let mut out = Multigraph::with_vertices(first.vertex_count());
    for e in first.edges() {
        out.add_edge(e.u, e.v);
    }
    let mut maps = vec![(0..first.vertex_count()).collect::<Vec<_>>()];
    for &(g, r) in &parts[1..] {
        let (u, v) = oriented(g, r)?;
        let mut map = vec![usize::MAX; g.vertex_count()];
        map[u] = u0;
        map[v] = v0;
        for x in map.iter_mut() {
            if *x == usize::MAX {
                *x = out.add_vertex(out.vertex_count().to_string());
            }
        }
        for (i, e) in g.edges().iter().enumerate() {
            if i != r.edge as usize {
                out.add_edge(map[e.u], map[e.v]);
            }
        }
        maps.push(map);
    }
    Ok((out, maps))
}

fn collide_raw(left: &Multigraph, l: EdgeRef, right: &Multigraph, r: EdgeRef) -> Result<(Multigraph, Vec<Vec<usize>>)> {
    let (glued, maps) = glue_raw(&[(left, l), (right, r)])?;
    let mut out = glued;
    out.remove_edge(EdgeId(l.edge));
    Ok((compact(&out), maps))
}

/// Appends a path of `len` edges from `u` to `v` through fresh vertices;
/// removes the referenced edge first when `replace` is set.
fn path_raw(g: &Multigraph, r: EdgeRef, len: usize, replace: bool) -> Result<Multigraph> {
    let (u, v) = oriented(g, r)?;
    let mut out = g.clone();
    if replace {
        out.remove_edge(EdgeId(r.edge));
    }
    let mut prev = u;
    for _ in 1..len {
        let x = out.add_vertex(out.vertex_count().to_string());
        out.add_edge(prev, x);
        prev = x;
    }
    out.add_edge(prev, v);
    Ok(compact(&out))
}

fn blow_up_raw(g: &Multigraph, m: u32) -> Result<Multigraph> {
    Ok(compact(&graph::blow_up(g, m as usize)?))
}

/// Weight of edge at position `i` of `g` at `δ`; fails on a weight conflict.
fn edge_weight(g: &Multigraph, i: usize, delta: u32) -> Result<u32> {
    let w = weight_function(g, delta)?.map_err(|w| Error::Certificate(format!("child has no weight function: {w:?}")))?;
    Ok(w.weight(g.edges()[i].id))
}

// ---------------------------------------------------------------------------
// Replay.

/// Rebuilds the graph of a certificate, validating every node invariant.
pub fn replay(cert: &ConstructionCert) -> Result<Multigraph> {
    if cert.schema_version != CERT_SCHEMA_VERSION {
        return Err(Error::Certificate(format!("unsupported schema_version {}", cert.schema_version)));
    }
    if cert.delta < 2 {
        return Err(Error::Certificate(format!("δ must be at least 2, got {}", cert.delta)));
    }
    replay_node(&cert.root, cert.kind, cert.delta)
}

fn replay_node(node: &CertNode, kind: CertKind, delta: u32) -> Result<Multigraph> {
    let bad = |msg: String| Err(Error::Certificate(msg));
    match (node, kind) {
        (CertNode::Seed { seed }, CertKind::Base) => match seed {
            Seed::Cycle { length } if *length == delta => seed_graph(*seed),
            Seed::K4 if delta == 2 => seed_graph(*seed),
            // K2 is the bridge block, compatible with every δ.
            Seed::K2 => seed_graph(*seed),
            _ => bad(format!("seed {seed:?} does not match δ = {delta}")),
        },
        (CertNode::Seed { seed: Seed::K2 }, CertKind::Indep) => seed_graph(Seed::K2),
        (CertNode::Glue { children, edges }, CertKind::Base) => {
            if delta < 3 {
                return bad("glue requires δ > 2".into());
            }
            if children.len() != delta as usize - 1 || edges.len() != children.len() {
                return bad(format!("glue needs exactly {} children and edge refs", delta - 1));
            }
            let graphs = children.iter().map(|c| replay_node(c, kind, delta)).collect::<Result<Vec<_>>>()?;
            for (g, r) in graphs.iter().zip(edges) {
                oriented(g, *r)?;
                if edge_weight(g, r.edge as usize, delta)? != delta - 1 {
                    return bad(format!("glued edge {} does not have weight δ-1", r.edge));
                }
            }
            let parts: Vec<_> = graphs.iter().zip(edges.iter().copied()).collect();
            Ok(glue_raw(&parts)?.0)
        }
        (CertNode::Subdivide { child, edge }, CertKind::Base) => {
            let g = replay_node(child, kind, delta)?;
            oriented(&g, *edge)?;
            if delta == 2 {
                return Ok(g);
            }
            if edge_weight(&g, edge.edge as usize, delta)? != 1 {
                return bad(format!("subdivided edge {} does not have weight 1", edge.edge));
            }
            path_raw(&g, *edge, delta as usize - 1, true)
        }
        (CertNode::Collide { left, right, edges }, CertKind::Base) => {
            if delta != 2 {
                return bad("collide requires δ = 2".into());
            }
            let l = replay_node(left, kind, delta)?;
            let r = replay_node(right, kind, delta)?;
            Ok(collide_raw(&l, edges[0], &r, edges[1])?.0)
        }
        (CertNode::AttachCycle { child, edge, length }, CertKind::Indep) => {
            if *length != delta + 1 {
                return bad(format!("attached cycle has length {length}, expected δ+1 = {}", delta + 1));
            }
            let g = replay_node(child, kind, delta)?;
            path_raw(&g, *edge, delta as usize, false)
        }
        (CertNode::BlowUp { child, m }, CertKind::Indep) => {
            if *m != delta - 1 {
                return bad(format!("blow-up multiplicity {m} must equal δ-1 = {}", delta - 1));
            }
            if matches!(**child, CertNode::BlowUp { .. }) {
                return bad("nested blow-up".into());
            }
            let g = replay_node(child, kind, delta)?;
            blow_up_raw(&g, *m)
        }
        _ => bad(format!("node not allowed in a {kind:?} certificate")),
    }
}

// ---------------------------------------------------------------------------
// Public operations on arbitrary graphs.

fn position(g: &Multigraph, e: EdgeId) -> Result<u32> {
    g.edges().iter().position(|x| x.id == e).map(|p| p as u32).ok_or(Error::UnknownEdge(e))
}

fn require_spade(g: &Multigraph, delta: u32, what: &str) -> Result<()> {
    match check_spade(g, delta)? {
        Ok(_) => Ok(()),
        Err(w) => Err(Error::pre(format!("{what} fails the good-flat equalities at δ = {delta}: {w:?}"))),
    }
}

/// Glues `δ-1` graphs along one edge each (edges of weight `δ-1`); the
/// identified edge has weight 1 in the result. Vertices are relabelled
/// `0..n` per the replay rule.
pub fn glue(parts: &[(Multigraph, EdgeId)], delta: u32) -> Result<Multigraph> {
    if delta < 3 {
        return Err(Error::pre("glue requires δ > 2"));
    }
    if parts.len() != delta as usize - 1 {
        return Err(Error::pre(format!("glue at δ = {delta} needs exactly {} parts, got {}", delta - 1, parts.len())));
    }
    let mut compacts = Vec::new();
    for (i, (g, e)) in parts.iter().enumerate() {
        require_spade(g, delta, &format!("part {i}"))?;
        let p = position(g, *e)?;
        let c = compact(g);
        if edge_weight(&c, p as usize, delta)? != delta - 1 {
            return Err(Error::pre(format!("glued edge {e} of part {i} has weight 1, needs δ-1")));
        }
        compacts.push((c, EdgeRef { edge: p, reversed: false }));
    }
    let refs: Vec<_> = compacts.iter().map(|(g, r)| (g, *r)).collect();
    Ok(glue_raw(&refs)?.0)
}

/// Replaces a weight-1 edge by a path of `δ-1` edges. At `δ = 2` this is the
/// identity.
pub fn subdivide(g: &Multigraph, e: EdgeId, delta: u32) -> Result<Multigraph> {
    let p = position(g, e)?;
    if delta == 2 {
        return Ok(g.clone());
    }
    require_spade(g, delta, "input")?;
    let c = compact(g);
    if edge_weight(&c, p as usize, delta)? != 1 {
        return Err(Error::pre(format!("edge {e} has weight δ-1; only weight-1 edges can be subdivided")));
    }
    let mut out = g.clone();
    let edge = *g.edge_or_err(e)?;
    out.remove_edge(e);
    let mut prev = edge.u;
    for _ in 1..delta - 1 {
        let x = out.add_fresh_vertex();
        out.add_edge(prev, x);
        prev = x;
    }
    out.add_edge(prev, edge.v);
    Ok(out)
}

/// Glues two `δ = 2` graphs along `e1`, `e2` and removes the shared edge.
pub fn collide(g1: &Multigraph, e1: EdgeId, g2: &Multigraph, e2: EdgeId) -> Result<Multigraph> {
    require_spade(g1, 2, "left part")?;
    require_spade(g2, 2, "right part")?;
    let (p1, p2) = (position(g1, e1)?, position(g2, e2)?);
    Ok(collide_raw(&compact(g1), EdgeRef { edge: p1, reversed: false }, &compact(g2), EdgeRef { edge: p2, reversed: false })?.0)
}

/// Adds a fresh path of `δ` edges between the endpoints of `e`, closing a
/// `(δ+1)`-cycle through `e`.
pub fn attach_cycle(h: &Multigraph, e: EdgeId, delta: u32) -> Result<Multigraph> {
    if delta < 2 {
        return Err(Error::pre(format!("δ must be at least 2, got {delta}")));
    }
    let edge = *h.edge_or_err(e)?;
    let mut out = h.clone();
    let mut prev = edge.u;
    for _ in 1..delta {
        let x = out.add_fresh_vertex();
        out.add_edge(prev, x);
        prev = x;
    }
    out.add_edge(prev, edge.v);
    Ok(out)
}

pub use crate::graph::blow_up;

// ---------------------------------------------------------------------------
// Decomposition.

/// A certificate for a given graph together with the isomorphism onto its
/// replay: `vertex_map[v]` is the replay vertex of input vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub certificate: ConstructionCert,
    pub vertex_map: Vec<usize>,
}

/// True when `map` is a bijection carrying the edge multiset of `a` onto
/// that of `b`.
pub fn is_isomorphism(a: &Multigraph, b: &Multigraph, map: &[usize]) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() || map.len() != a.vertex_count() {
        return false;
    }
    let mut seen = vec![false; b.vertex_count()];
    for &m in map {
        if m >= seen.len() || std::mem::replace(&mut seen[m], true) {
            return false;
        }
    }
    let mut ka: Vec<_> = a.edges().iter().map(|e| (map[e.u].min(map[e.v]), map[e.u].max(map[e.v]))).collect();
    ka.sort_unstable();
    ka == b.edge_key_multiset()
}

struct Built {
    node: CertNode,
    graph: Multigraph,
    /// Input vertex -> replay vertex.
    map: Vec<usize>,
}

fn edge_ref(b: &Built, u: usize, v: usize) -> Result<EdgeRef> {
    let (x, y) = (b.map[u], b.map[v]);
    let i = b
        .graph
        .edges()
        .iter()
        .position(|e| (e.u, e.v) == (x, y) || (e.u, e.v) == (y, x))
        .ok_or_else(|| Error::Inconsistency(format!("replayed child lost edge {u}-{v}")))?;
    Ok(EdgeRef { edge: i as u32, reversed: b.graph.edges()[i].u != x })
}

/// Splits a simple 2-connected graph passing the good-flat equalities at `δ`
/// into construction steps. The replay of the returned certificate is
/// isomorphic to `g` via `vertex_map`.
pub fn decompose_base(g: &Multigraph, delta: u32) -> Result<Decomposition> {
    let g = g.normalize();
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    if g.vertex_count() == 2 && g.edge_count() == 1 {
        let cert = ConstructionCert::new(CertKind::Base, delta.max(2), CertNode::Seed { seed: Seed::K2 });
        return Ok(Decomposition { certificate: cert, vertex_map: vec![0, 1] });
    }
    require_spade(&g, delta, "input")?;
    let c = compact(&g);
    let built = if delta == 2 { decompose_two(&c)? } else { decompose_large(&c, delta)? };
    let cert = ConstructionCert::new(CertKind::Base, delta, built.node);
    debug_assert!(is_isomorphism(&c, &built.graph, &built.map));
    Ok(Decomposition { certificate: cert, vertex_map: built.map })
}

fn induced_compact(g: &Multigraph, vertices: &[usize]) -> Multigraph {
    compact(&g.induced(vertices))
}

/// Components of `g - removed`, as sorted vertex lists ordered by their
/// smallest vertex.
fn components_without(g: &Multigraph, removed: &[usize]) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let nb = g.neighbours();
    let mut comp = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if removed.contains(&s) || comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut stack = vec![s];
        comp[s] = id;
        let mut members = Vec::new();
        while let Some(x) = stack.pop() {
            members.push(x);
            for &y in &nb[x] {
                if !removed.contains(&y) && comp[y] == usize::MAX {
                    comp[y] = id;
                    stack.push(y);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Cycle order starting at vertex 0, for a graph known to be a cycle.
fn cycle_order(g: &Multigraph) -> Vec<usize> {
    let nb = g.neighbours();
    let mut order = vec![0];
    let mut prev = usize::MAX;
    let mut cur = 0;
    while order.len() < g.vertex_count() {
        let next = if nb[cur][0] != prev { nb[cur][0] } else { nb[cur][1] };
        order.push(next);
        prev = cur;
        cur = next;
    }
    order
}

fn is_cycle(g: &Multigraph) -> bool {
    g.vertex_count() >= 3 && g.edge_count() == g.vertex_count() && g.degrees().iter().all(|&d| d == 2) && graph::is_connected(g)
}

fn seed_built(g: &Multigraph, seed: Seed) -> Result<Built> {
    let graph = seed_graph(seed)?;
    let map = match seed {
        Seed::Cycle { .. } => {
            let mut map = vec![0; g.vertex_count()];
            for (i, v) in cycle_order(g).into_iter().enumerate() {
                map[v] = i;
            }
            map
        }
        _ => (0..g.vertex_count()).collect(),
    };
    Ok(Built { node: CertNode::Seed { seed }, graph, map })
}

/// Recursion for `δ > 2` on a compact graph passing the equalities.
fn decompose_large(g: &Multigraph, delta: u32) -> Result<Built> {
    if is_cycle(g) {
        if g.vertex_count() as u32 != delta {
            return Err(Error::Inconsistency(format!("{}-cycle passes the equalities at δ = {delta}", g.vertex_count())));
        }
        return seed_built(g, Seed::Cycle { length: delta });
    }
    let w = weight_function(g, delta)?.map_err(|w| Error::Inconsistency(format!("{w:?}")))?;
    if let Some(e) = g.edges().iter().find(|e| w.weight(e.id) == 1) {
        // A weight-1 edge uv splits G into δ-1 glued parts.
        let (u, v) = (e.u, e.v);
        let comps = components_without(g, &[u, v]);
        if comps.len() != delta as usize - 1 {
            return Err(Error::Inconsistency(format!(
                "removing the ends of weight-1 edge {u}-{v} leaves {} components, expected {}",
                comps.len(),
                delta - 1
            )));
        }
        let mut parts = Vec::new();
        for comp in &comps {
            let mut vs = comp.clone();
            vs.extend([u, v]);
            vs.sort_unstable();
            let sub = induced_compact(g, &vs);
            check_part(&sub, delta)?;
            let built = decompose_large(&sub, delta)?;
            // Local index of input vertex x inside `sub`.
            let local = |x: usize| vs.binary_search(&x).unwrap();
            let r = edge_ref(&built, local(u), local(v))?;
            parts.push((vs, built, r));
        }
        let inputs: Vec<_> = parts.iter().map(|(_, b, r)| (&b.graph, *r)).collect();
        let (graph, maps) = glue_raw(&inputs)?;
        let mut map = vec![usize::MAX; g.vertex_count()];
        for ((vs, built, _), gm) in parts.iter().zip(&maps) {
            for (local, &x) in vs.iter().enumerate() {
                map[x] = gm[built.map[local]];
            }
        }
        let node = CertNode::Glue {
            edges: parts.iter().map(|p| p.2).collect(),
            children: parts.into_iter().map(|p| p.1.node).collect(),
        };
        return Ok(Built { node, graph, map });
    }
    // All weights are δ-1: undo a subdivision.
    let graph::EarDecomposition::Ears(ears) = graph::ears(g) else { unreachable!("cycle handled above") };
    for ear in ears.iter().filter(|e| e.len() == delta as usize - 1) {
        let (a, b) = ear.ends();
        if g.edge_between(a, b).is_some() {
            continue;
        }
        let inner = ear.inner();
        let keep: Vec<usize> = (0..g.vertex_count()).filter(|x| !inner.contains(x)).collect();
        let mut smaller = g.induced(&keep);
        let (la, lb) = (keep.binary_search(&a).unwrap(), keep.binary_search(&b).unwrap());
        let new_edge = smaller.add_edge(la, lb);
        let smaller_c = compact(&smaller);
        if !is_two_connected(&smaller_c) {
            continue;
        }
        let Ok(ws) = check_spade(&smaller_c, delta)? else { continue };
        let pos = smaller.edges().iter().position(|e| e.id == new_edge).unwrap();
        if ws.weight(smaller_c.edges()[pos].id) != 1 {
            continue;
        }
        let built = decompose_large(&smaller_c, delta)?;
        let r = edge_ref(&built, la, lb)?;
        let graph = path_raw(&built.graph, r, delta as usize - 1, true)?;
        let mut map = vec![usize::MAX; g.vertex_count()];
        for (local, &x) in keep.iter().enumerate() {
            map[x] = built.map[local];
        }
        let fresh = built.graph.vertex_count();
        for (i, &x) in inner.iter().enumerate() {
            map[x] = fresh + i;
        }
        return Ok(Built { node: CertNode::Subdivide { child: Box::new(built.node), edge: r }, graph, map });
    }
    Err(Error::Inconsistency(format!("no reducible {}-ear found at δ = {delta}", delta - 1)))
}

fn check_part(g: &Multigraph, delta: u32) -> Result<()> {
    match check_spade(g, delta)? {
        Ok(_) => Ok(()),
        Err(w) => Err(Error::Inconsistency(format!("split part fails the equalities at δ = {delta}: {w:?}"))),
    }
}

/// Recursion for `δ = 2`: K4, or a collision at the first separating pair.
fn decompose_two(g: &Multigraph) -> Result<Built> {
    let n = g.vertex_count();
    for v1 in 0..n {
        for v2 in v1 + 1..n {
            let comps = components_without(g, &[v1, v2]);
            if comps.len() < 2 {
                continue;
            }
            if comps.len() != 2 || g.edge_between(v1, v2).is_some() {
                return Err(Error::Inconsistency(format!(
                    "separating pair {v1},{v2}: {} components, edge present: {}",
                    comps.len(),
                    g.edge_between(v1, v2).is_some()
                )));
            }
            let mut sides = Vec::new();
            for comp in &comps {
                let mut vs = comp.clone();
                vs.extend([v1, v2]);
                vs.sort_unstable();
                let mut sub = g.induced(&vs);
                let (a, b) = (vs.binary_search(&v1).unwrap(), vs.binary_search(&v2).unwrap());
                sub.add_edge(a, b);
                let sub = compact(&sub);
                check_part(&sub, 2)?;
                let built = decompose_two(&sub)?;
                let r = edge_ref(&built, a, b)?;
                sides.push((vs, built, r));
            }
            let (graph, maps) = collide_raw(&sides[0].1.graph, sides[0].2, &sides[1].1.graph, sides[1].2)?;
            let mut map = vec![usize::MAX; n];
            for ((vs, built, _), gm) in sides.iter().zip(&maps) {
                for (local, &x) in vs.iter().enumerate() {
                    map[x] = gm[built.map[local]];
                }
            }
            let edges = [sides[0].2, sides[1].2];
            let mut it = sides.into_iter();
            let left = Box::new(it.next().unwrap().1.node);
            let right = Box::new(it.next().unwrap().1.node);
            return Ok(Built { node: CertNode::Collide { left, right, edges }, graph, map });
        }
    }
    if n == 4 && g.edge_count() == 6 {
        return seed_built(g, Seed::K4);
    }
    Err(Error::Inconsistency(format!("3-connected graph on {n} vertices passes the δ = 2 equalities but is not K4")))
}

// ---------------------------------------------------------------------------
// Random certificates.

/// Vertex budget for random certificates; keeps replay checks cheap.
pub const RANDOM_VERTEX_BUDGET: usize = 16;

/// Draws a random valid certificate of the given kind, `δ` and depth bound.
pub fn random_certificate<R: Rng>(rng: &mut R, kind: CertKind, delta: u32, max_depth: usize) -> Result<ConstructionCert> {
    if delta < 2 {
        return Err(Error::pre("δ must be at least 2"));
    }
    let root = match kind {
        CertKind::Base => random_base(rng, delta, max_depth)?.0,
        CertKind::Indep => {
            let steps = rng.gen_range(0..=max_depth.saturating_sub(usize::from(delta > 2)));
            let mut node = CertNode::Seed { seed: Seed::K2 };
            let mut g = seed_graph(Seed::K2)?;
            for _ in 0..steps {
                if g.vertex_count() + delta as usize - 1 > RANDOM_VERTEX_BUDGET {
                    break;
                }
                let edge = EdgeRef { edge: rng.gen_range(0..g.edge_count()) as u32, reversed: rng.gen() };
                g = path_raw(&g, edge, delta as usize, false)?;
                node = CertNode::AttachCycle { child: Box::new(node), edge, length: delta + 1 };
            }
            if delta > 2 {
                node = CertNode::BlowUp { child: Box::new(node), m: delta - 1 };
            }
            node
        }
    };
    Ok(ConstructionCert::new(kind, delta, root))
}

fn random_base<R: Rng>(rng: &mut R, delta: u32, depth: usize) -> Result<(CertNode, Multigraph)> {
    let seed = if delta == 2 { Seed::K4 } else { Seed::Cycle { length: delta } };
    let leaf = || -> Result<(CertNode, Multigraph)> { Ok((CertNode::Seed { seed }, seed_graph(seed)?)) };
    if depth == 0 || rng.gen_bool(0.3) {
        return leaf();
    }
    if delta == 2 {
        let (l, lg) = random_base(rng, 2, depth - 1)?;
        let (r, rg) = random_base(rng, 2, depth - 1)?;
        if lg.vertex_count() + rg.vertex_count() - 2 > RANDOM_VERTEX_BUDGET {
            return leaf();
        }
        let edges = [
            EdgeRef { edge: rng.gen_range(0..lg.edge_count()) as u32, reversed: false },
            EdgeRef { edge: rng.gen_range(0..rg.edge_count()) as u32, reversed: rng.gen() },
        ];
        let g = collide_raw(&lg, edges[0], &rg, edges[1])?.0;
        return Ok((CertNode::Collide { left: Box::new(l), right: Box::new(r), edges }, g));
    }
    if rng.gen_bool(0.5) {
        // Subdivide a weight-1 edge of a child, if it has one.
        let (c, cg) = random_base(rng, delta, depth - 1)?;
        let w = weight_function(&cg, delta)?.map_err(|w| Error::Inconsistency(format!("{w:?}")))?;
        let ones: Vec<usize> = (0..cg.edge_count()).filter(|&i| w.weight(cg.edges()[i].id) == 1).collect();
        if let Some(&i) = ones.choose(rng) {
            if cg.vertex_count() + delta as usize - 2 <= RANDOM_VERTEX_BUDGET {
                let edge = EdgeRef { edge: i as u32, reversed: rng.gen() };
                let g = path_raw(&cg, edge, delta as usize - 1, true)?;
                return Ok((CertNode::Subdivide { child: Box::new(c), edge }, g));
            }
        }
    }
    let mut children = Vec::new();
    let mut total = 2;
    for _ in 0..delta - 1 {
        let (c, cg) = random_base(rng, delta, depth - 1)?;
        let w = weight_function(&cg, delta)?.map_err(|w| Error::Inconsistency(format!("{w:?}")))?;
        let heavy: Vec<usize> = (0..cg.edge_count()).filter(|&i| w.weight(cg.edges()[i].id) == delta - 1).collect();
        let i = *heavy.choose(rng).ok_or_else(|| Error::Inconsistency("part without weight δ-1 edge".into()))?;
        total += cg.vertex_count() - 2;
        children.push((c, cg, EdgeRef { edge: i as u32, reversed: rng.gen() }));
    }
    if total > RANDOM_VERTEX_BUDGET {
        return leaf();
    }
    let parts: Vec<_> = children.iter().map(|(_, g, r)| (g, *r)).collect();
    let g = glue_raw(&parts)?.0;
    let edges = children.iter().map(|c| c.2).collect();
    Ok((CertNode::Glue { children: children.into_iter().map(|c| c.0).collect(), edges }, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::base_verdict;
    use crate::graph::{isomorphism, parse_graph};
    use rand::SeedableRng;

    fn g5() -> Multigraph {
        Multigraph::from_labelled_edges(&[("a", "x"), ("x", "b"), ("a", "c"), ("c", "b"), ("a", "d"), ("d", "b")])
    }

    fn k4_minus_e() -> Multigraph {
        Multigraph::from_labelled_edges(&[("a", "b"), ("a", "c"), ("c", "b"), ("a", "d"), ("d", "b")])
    }

    #[test]
    fn glue_two_triangles() {
        let c3 = Multigraph::cycle(3);
        let g = glue(&[(c3.clone(), EdgeId(0)), (c3.clone(), EdgeId(2))], 3).unwrap();
        assert!(isomorphism(&g, &k4_minus_e()).accepted());
        assert!(check_spade(&g, 3).unwrap().is_ok());
        let err = glue(&[(c3.clone(), EdgeId(0)), (c3.clone(), EdgeId(0)), (c3, EdgeId(0))], 3).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn glue_four_pentagons() {
        let c5 = Multigraph::cycle(5);
        let g = glue(&vec![(c5, EdgeId(1)); 4], 5).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (14, 17));
        assert!(check_spade(&g, 5).unwrap().is_ok());
    }

    #[test]
    fn subdivide_examples() {
        let g = subdivide(&k4_minus_e(), EdgeId(0), 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 6));
        let w = check_spade(&g, 3).unwrap().unwrap();
        assert!(w.weights.values().all(|&x| x == 2));
        assert!(matches!(subdivide(&Multigraph::cycle(3), EdgeId(0), 3), Err(Error::Precondition(_))));
        assert_eq!(subdivide(&Multigraph::complete(4), EdgeId(0), 2).unwrap(), Multigraph::complete(4));
    }

    #[test]
    fn collide_examples() {
        let k4 = Multigraph::complete(4);
        let g = collide(&k4, EdgeId(0), &k4, EdgeId(0)).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 10));
        assert!(check_spade(&g, 2).unwrap().is_ok());
        let h = collide(&k4, EdgeId(3), &g, EdgeId(4)).unwrap();
        assert_eq!((h.vertex_count(), h.edge_count()), (8, 14));
        assert!(check_spade(&h, 2).unwrap().is_ok());
        assert!(collide(&k4, EdgeId(0), &Multigraph::cycle(3), EdgeId(0)).is_err());
    }

    #[test]
    fn attach_examples() {
        let c4 = attach_cycle(&Multigraph::path(2), EdgeId(0), 3).unwrap();
        assert!(isomorphism(&c4, &Multigraph::cycle(4)).accepted());
        let g = attach_cycle(&c4, EdgeId(1), 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 7));
        assert!(isomorphism(&attach_cycle(&Multigraph::path(2), EdgeId(0), 2).unwrap(), &Multigraph::cycle(3)).accepted());
        assert_eq!(attach_cycle(&c4, EdgeId(9), 3).unwrap_err(), Error::UnknownEdge(EdgeId(9)));
    }

    #[test]
    fn decompose_named() {
        let d = decompose_base(&g5(), 3).unwrap();
        assert_eq!(d.certificate.to_string(), "Subdivide(Glue(Seed(C3), Seed(C3)))");
        let r = replay(&d.certificate).unwrap();
        assert!(is_isomorphism(&compact(&g5()), &r, &d.vertex_map));

        let d = decompose_base(&Multigraph::complete(4), 2).unwrap();
        assert_eq!(d.certificate.to_string(), "Seed(K4)");

        let k4 = Multigraph::complete(4);
        let g = collide(&k4, EdgeId(0), &k4, EdgeId(5)).unwrap();
        let d = decompose_base(&g, 2).unwrap();
        assert_eq!(d.certificate.to_string(), "Collide(Seed(K4), Seed(K4))");
        assert!(is_isomorphism(&g, &replay(&d.certificate).unwrap(), &d.vertex_map));
    }

    #[test]
    fn decompose_rejects_negative() {
        let g = parse_graph("1 2\n2 3\n3 4\n4 5\n5 1\n1 3\n").unwrap();
        assert!(matches!(decompose_base(&g, 4), Err(Error::Precondition(_))));
    }

    #[test]
    fn replay_examples() {
        let c = ConstructionCert::new(CertKind::Base, 5, CertNode::Seed { seed: Seed::Cycle { length: 5 } });
        assert_eq!(replay(&c).unwrap(), Multigraph::cycle(5));
        let root = CertNode::BlowUp {
            child: Box::new(CertNode::AttachCycle {
                child: Box::new(CertNode::Seed { seed: Seed::K2 }),
                edge: EdgeRef { edge: 0, reversed: false },
                length: 4,
            }),
            m: 2,
        };
        let g = replay(&ConstructionCert::new(CertKind::Indep, 3, root)).unwrap();
        let doubled = graph::blow_up(&Multigraph::cycle(4), 2).unwrap();
        assert!(isomorphism(&g, &doubled).accepted());
    }

    #[test]
    fn replay_validates() {
        let bad_glue = CertNode::Glue {
            children: vec![CertNode::Seed { seed: Seed::Cycle { length: 3 } }],
            edges: vec![EdgeRef { edge: 0, reversed: false }],
        };
        assert!(matches!(replay(&ConstructionCert::new(CertKind::Base, 3, bad_glue)), Err(Error::Certificate(_))));
        let bad_seed = CertNode::Seed { seed: Seed::Cycle { length: 4 } };
        assert!(replay(&ConstructionCert::new(CertKind::Base, 3, bad_seed)).is_err());
        let bad_kind = CertNode::Seed { seed: Seed::K4 };
        assert!(replay(&ConstructionCert::new(CertKind::Indep, 2, bad_kind)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let d = decompose_base(&g5(), 3).unwrap();
        let text = d.certificate.to_json();
        assert_eq!(ConstructionCert::from_json(&text).unwrap(), d.certificate);
        assert!(text.contains("\"schema_version\": 1"));
    }

    #[test]
    fn glue_order_independent() {
        let c3 = compact(&Multigraph::cycle(3));
        let c5 = glue(&[(Multigraph::cycle(3), EdgeId(0)), (Multigraph::cycle(3), EdgeId(0))], 3).unwrap();
        let sub = subdivide(&c5, c5.edges()[0].id, 3).unwrap();
        let a = glue(&[(sub.clone(), sub.edges()[1].id), (c3.clone(), EdgeId(0))], 3).unwrap();
        let b = glue(&[(c3, EdgeId(0)), (sub.clone(), sub.edges()[1].id)], 3).unwrap();
        assert!(isomorphism(&a, &b).accepted());
    }

    #[test]
    fn random_certificates_replay_positive() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for delta in 2..=5 {
            for _ in 0..5 {
                let c = random_certificate(&mut rng, CertKind::Base, delta, 3).unwrap();
                let g = replay(&c).unwrap();
                assert!(g.vertex_count() <= RANDOM_VERTEX_BUDGET);
                let v = base_verdict(&g).unwrap();
                assert_eq!(v.delta, Some(delta), "{c}");
            }
        }
    }
}
