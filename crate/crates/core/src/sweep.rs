//! Exhaustive small-graph sweeps that cross-check the checkers against each
//! other and against the lattice oracle.
//!
//! Graphs are enumerated by vertex augmentation: every graph on `n`
//! vertices is some graph on `n - 1` vertices plus a vertex joined to a
//! subset of it. Isomorphic copies are rejected by a brute-force canonical
//! form (the smallest adjacency bitmask over all degree-respecting vertex
//! orders), which is plenty at desk scale.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::base::{self, check_heart, check_spade};
use crate::graph::{blow_up, is_two_connected, DEFAULT_ENUMERATION_GUARD};
use crate::indep::{self, check_chordal_k4free, check_club, recognize_cycle_construction};
use crate::oracle::{facets_from_cor33, gorenstein_search, polytope_of, FacetMethod, PolytopeKind};
use crate::{Error, Multigraph, Result};

/// Largest vertex count the enumerator accepts.
pub const MAX_SWEEP_VERTICES: usize = 8;

fn bit(i: usize, j: usize) -> u64 {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    1 << (j * (j - 1) / 2 + i)
}

fn code(adj: &[u32], order: &[usize]) -> u64 {
    let mut c = 0;
    for (a, &x) in order.iter().enumerate() {
        for (b, &y) in order.iter().enumerate().take(a) {
            if adj[x] >> y & 1 == 1 {
                c |= bit(a, b);
            }
        }
    }
    c
}

/// Smallest code over vertex orders that list vertices by descending degree.
fn canonical(adj: &[u32]) -> u64 {
    let n = adj.len();
    let deg: Vec<u32> = adj.iter().map(|r| r.count_ones()).collect();
    let mut classes: BTreeMap<std::cmp::Reverse<u32>, Vec<usize>> = BTreeMap::new();
    for (v, &d) in deg.iter().enumerate().take(n) {
        classes.entry(std::cmp::Reverse(d)).or_default().push(v);
    }
    let classes: Vec<Vec<usize>> = classes.into_values().collect();
    let mut best = u64::MAX;
    let mut order = Vec::with_capacity(n);
    permute(&classes, 0, &mut order, adj, &mut best);
    best
}

fn permute(classes: &[Vec<usize>], ci: usize, order: &mut Vec<usize>, adj: &[u32], best: &mut u64) {
    if ci == classes.len() {
        *best = (*best).min(code(adj, order));
        return;
    }
    let mut rest = classes[ci].clone();
    permute_class(classes, ci, &mut rest, order, adj, best);
}

fn permute_class(classes: &[Vec<usize>], ci: usize, rest: &mut Vec<usize>, order: &mut Vec<usize>, adj: &[u32], best: &mut u64) {
    if rest.is_empty() {
        permute(classes, ci + 1, order, adj, best);
        return;
    }
    for k in 0..rest.len() {
        let v = rest.remove(k);
        order.push(v);
        permute_class(classes, ci, rest, order, adj, best);
        order.pop();
        rest.insert(k, v);
    }
}

fn decode(n: usize, code: u64) -> Multigraph {
    let mut edges = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if code & bit(i, j) != 0 {
                edges.push((i, j));
            }
        }
    }
    Multigraph::from_edges(n, &edges)
}

/// One representative per isomorphism class of simple graphs on exactly `n`
/// vertices, as canonical codes in increasing order.
fn codes_on(n: usize) -> Result<Vec<u64>> {
    if n > MAX_SWEEP_VERTICES {
        return Err(Error::pre(format!("graph enumeration supports at most {MAX_SWEEP_VERTICES} vertices, got {n}")));
    }
    let mut level: BTreeSet<u64> = BTreeSet::from([0]);
    for k in 2..=n.max(1) {
        let mut next = BTreeSet::new();
        for &c in &level {
            let mut adj = vec![0u32; k];
            for j in 1..k - 1 {
                for i in 0..j {
                    if c & bit(i, j) != 0 {
                        adj[i] |= 1 << j;
                        adj[j] |= 1 << i;
                    }
                }
            }
            for nb in 0u32..1 << (k - 1) {
                let mut a = adj.clone();
                a[k - 1] = nb;
                for (i, row) in a.iter_mut().enumerate().take(k - 1) {
                    if nb >> i & 1 == 1 {
                        *row |= 1 << (k - 1);
                    }
                }
                next.insert(canonical(&a));
            }
        }
        level = next;
    }
    Ok(if n == 0 { Vec::new() } else { level.into_iter().collect() })
}

/// All simple graphs on exactly `n` vertices up to isomorphism, labelled
/// `0..n`, ordered by edge count then canonical code.
pub fn all_graphs(n: usize) -> Result<Vec<Multigraph>> {
    let mut codes = codes_on(n)?;
    codes.sort_by_key(|&c| (c.count_ones(), c));
    Ok(codes.into_iter().map(|c| decode(n, c)).collect())
}

/// All 2-connected simple graphs with `3..=max_vertices` vertices up to
/// isomorphism, ordered by vertex count, edge count, canonical code.
pub fn two_connected_graphs(max_vertices: usize) -> Result<Vec<Multigraph>> {
    let mut out = Vec::new();
    for n in 3..=max_vertices {
        out.extend(all_graphs(n)?.into_iter().filter(is_two_connected));
    }
    Ok(out)
}

/// Canonical key of a simple graph: its edges after canonical relabelling.
pub fn graph_key(g: &Multigraph) -> String {
    let n = g.vertex_count();
    let mut adj = vec![0u32; n];
    for e in g.edges() {
        adj[e.u] |= 1 << e.v;
        adj[e.v] |= 1 << e.u;
    }
    let c = canonical(&adj);
    decode(n, c).edges().iter().map(|e| format!("{}-{}", e.u, e.v)).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    /// Base checker, optionally against the oracle.
    Base,
    /// Independence checker on blow-ups, optionally against the oracle.
    Indep,
    /// The three independence characterizations against each other.
    IndepEquivalence,
    /// The good-flat and block-count equality systems against each other.
    SpadeHeart,
    /// Predicted base polytope facets against computed ones.
    Facets,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub kind: SweepKind,
    pub max_vertices: usize,
    /// Instances with more edges (after blow-up) are skipped.
    pub max_edges: Option<usize>,
    /// Blow-up multiplicities `1..=max_multiplicity` for [`SweepKind::Indep`].
    pub max_multiplicity: usize,
    pub cross_validate: bool,
    /// `δ` range for [`SweepKind::IndepEquivalence`].
    pub delta_range: (u32, u32),
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl SweepConfig {
    pub fn new(kind: SweepKind, max_vertices: usize) -> Self {
        SweepConfig {
            kind,
            max_vertices,
            max_edges: None,
            max_multiplicity: 3,
            cross_validate: false,
            delta_range: (2, 8),
            jobs: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub graph: String,
    pub multiplicity: usize,
    pub deltas: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub graph: String,
    pub multiplicity: usize,
    pub delta: Option<u32>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub graphs: usize,
    pub instances: usize,
    /// Positive instances by `δ` (keyed by its decimal string), plus
    /// `"not_gorenstein"`; for facet sweeps, instances by facet method.
    pub counts_per_delta: BTreeMap<String, usize>,
    pub gorenstein: Vec<CensusEntry>,
    pub mismatches: Vec<Mismatch>,
    pub multi_delta: Vec<CensusEntry>,
}

#[derive(Default)]
struct Partial {
    instances: usize,
    counts: Vec<String>,
    gorenstein: Vec<CensusEntry>,
    mismatches: Vec<Mismatch>,
    multi: Vec<CensusEntry>,
}

impl Partial {
    fn mismatch(&mut self, key: &str, m: usize, delta: Option<u32>, detail: String) {
        self.mismatches.push(Mismatch { graph: key.to_string(), multiplicity: m, delta, detail });
    }
}

/// Turns internal inconsistencies into mismatch records; other errors
/// (guards, overflow) abort the sweep.
fn soft<T>(r: Result<T>, p: &mut Partial, key: &str, m: usize, delta: Option<u32>) -> Result<Option<T>> {
    match r {
        Ok(t) => Ok(Some(t)),
        Err(Error::Inconsistency(msg)) => {
            p.mismatch(key, m, delta, msg);
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn oracle_delta(g: &Multigraph, kind: PolytopeKind) -> Result<Option<u32>> {
    let p = polytope_of(g, kind, DEFAULT_ENUMERATION_GUARD)?;
    Ok(gorenstein_search(&p)?.map(|w| w.delta))
}

fn sweep_base(g: &Multigraph, cfg: &SweepConfig) -> Result<Partial> {
    let mut p = Partial::default();
    let key = graph_key(g);
    if cfg.max_edges.is_some_and(|m| g.edge_count() > m) {
        return Ok(p);
    }
    p.instances = 1;
    let Some(v) = soft(base::base_verdict(g), &mut p, &key, 1, None)? else {
        return Ok(p);
    };
    match v.status {
        base::Status::Gorenstein => {
            let d = v.delta.unwrap();
            p.counts.push(d.to_string());
            p.gorenstein.push(CensusEntry { graph: key.clone(), multiplicity: 1, deltas: v.valid_deltas.clone() });
            if v.valid_deltas.len() > 1 {
                p.multi.push(CensusEntry { graph: key.clone(), multiplicity: 1, deltas: v.valid_deltas.clone() });
            }
        }
        base::Status::NotGorenstein => p.counts.push("not_gorenstein".into()),
    }
    if cfg.cross_validate {
        if let Some(o) = soft(oracle_delta(g, PolytopeKind::Base), &mut p, &key, 1, v.delta)? {
            let agree = match o {
                Some(d) => v.valid_deltas == [d],
                None => v.status == base::Status::NotGorenstein,
            };
            if !agree {
                p.mismatch(&key, 1, v.delta, format!("checker {:?} {:?}, oracle {o:?}", v.status, v.valid_deltas));
            }
        }
    }
    Ok(p)
}

fn sweep_indep(g: &Multigraph, cfg: &SweepConfig) -> Result<Partial> {
    let mut p = Partial::default();
    let key = graph_key(g);
    for m in 1..=cfg.max_multiplicity {
        if cfg.max_edges.is_some_and(|cap| g.edge_count() * m > cap) {
            break;
        }
        p.instances += 1;
        let h = blow_up(g, m)?;
        let Some(v) = soft(indep::indep_verdict(&h), &mut p, &key, m, None)? else {
            continue;
        };
        match v.status {
            indep::Status::Gorenstein => {
                let d = v.delta.unwrap();
                p.counts.push(d.to_string());
                if d != m as u32 + 1 {
                    p.mismatch(&key, m, v.delta, format!("δ = {d} but multiplicity {m}"));
                }
                p.gorenstein.push(CensusEntry { graph: key.clone(), multiplicity: m, deltas: vec![d] });
            }
            indep::Status::NotGorenstein => p.counts.push("not_gorenstein".into()),
        }
        if cfg.cross_validate {
            if let Some(o) = soft(oracle_delta(&h, PolytopeKind::Independence), &mut p, &key, m, v.delta)? {
                if o != v.delta {
                    p.mismatch(&key, m, v.delta, format!("checker {:?} δ {:?}, oracle {o:?}", v.status, v.delta));
                }
            }
        }
    }
    Ok(p)
}

fn sweep_equivalence(g: &Multigraph, cfg: &SweepConfig) -> Result<Partial> {
    let mut p = Partial::default();
    let key = graph_key(g);
    let mut deltas = Vec::new();
    for d in cfg.delta_range.0..=cfg.delta_range.1 {
        p.instances += 1;
        let club = check_club(g, d)?.is_ok();
        let chordal = check_chordal_k4free(g, d)?.is_ok();
        let cert = recognize_cycle_construction(g, d)?.is_some();
        if club != chordal || chordal != cert {
            p.mismatch(&key, 1, Some(d), format!("equalities {club}, chordal/K4-free {chordal}, cycle construction {cert}"));
        }
        if club {
            p.counts.push(d.to_string());
            deltas.push(d);
        } else {
            p.counts.push("not_gorenstein".into());
        }
    }
    if !deltas.is_empty() {
        p.gorenstein.push(CensusEntry { graph: key.clone(), multiplicity: 1, deltas: deltas.clone() });
        if deltas.len() > 1 {
            p.multi.push(CensusEntry { graph: key, multiplicity: 1, deltas });
        }
    }
    Ok(p)
}

fn sweep_spade_heart(g: &Multigraph, _cfg: &SweepConfig) -> Result<Partial> {
    let mut p = Partial::default();
    let key = graph_key(g);
    let mut deltas = Vec::new();
    for d in 2..=g.edge_count() as u32 + 1 {
        p.instances += 1;
        let spade = check_spade(g, d)?.is_ok();
        let heart = check_heart(g, d)?.is_ok();
        if spade != heart {
            p.mismatch(&key, 1, Some(d), format!("good-flat system {spade}, block-count system {heart}"));
        }
        if spade {
            p.counts.push(d.to_string());
            deltas.push(d);
        }
    }
    if deltas.is_empty() {
        p.counts.push("not_gorenstein".into());
    } else {
        p.gorenstein.push(CensusEntry { graph: key.clone(), multiplicity: 1, deltas: deltas.clone() });
        if deltas.len() > 1 {
            p.multi.push(CensusEntry { graph: key, multiplicity: 1, deltas });
        }
    }
    Ok(p)
}

fn sweep_facets(g: &Multigraph, _cfg: &SweepConfig) -> Result<Partial> {
    let mut p = Partial::default();
    let key = graph_key(g);
    p.instances = 1;
    let (poly, predicted) = facets_from_cor33(g, DEFAULT_ENUMERATION_GUARD)?;
    // Brute force when within its guards, double description beyond.
    let mut reference = poly.clone();
    reference.compute_facets(FacetMethod::Auto)?;
    let method = reference.facet_method.unwrap();
    p.counts.push(serde_json::to_value(method).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default());
    let a: BTreeSet<_> = predicted.iter().map(|f| f.facet.normal.clone()).collect();
    let b: BTreeSet<_> = reference.facets.iter().map(|f| f.normal.clone()).collect();
    if a != b || a.len() != predicted.len() || !reference.facets_verified()? {
        p.mismatch(&key, 1, None, format!("predicted {} facets, computed {} ({method:?})", predicted.len(), b.len()));
    }
    Ok(p)
}

/// Runs a sweep over every 2-connected simple graph up to
/// `cfg.max_vertices` (the independence sweep also blows up K2). Results do
/// not depend on `cfg.jobs`: workers return per-graph records which are
/// merged in enumeration order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepSummary> {
    let mut graphs = two_connected_graphs(cfg.max_vertices)?;
    if cfg.kind == SweepKind::Indep && cfg.max_vertices >= 2 {
        graphs.insert(0, Multigraph::complete(2));
    }
    let one = |g: &Multigraph| match cfg.kind {
        SweepKind::Base => sweep_base(g, cfg),
        SweepKind::Indep => sweep_indep(g, cfg),
        SweepKind::IndepEquivalence => sweep_equivalence(g, cfg),
        SweepKind::SpadeHeart => sweep_spade_heart(g, cfg),
        SweepKind::Facets => sweep_facets(g, cfg),
    };
    let parts: Vec<Result<Partial>> = match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::pre(format!("thread pool: {e}")))?
            .install(|| graphs.par_iter().map(one).collect()),
        None => graphs.par_iter().map(one).collect(),
    };
    let mut s = SweepSummary { graphs: graphs.len(), ..Default::default() };
    for part in parts {
        let part = part?;
        s.instances += part.instances;
        for c in part.counts {
            *s.counts_per_delta.entry(c).or_default() += 1;
        }
        s.gorenstein.extend(part.gorenstein);
        s.mismatches.extend(part.mismatches);
        s.multi_delta.extend(part.multi);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_counts() {
        // Numbers of graphs on n vertices up to isomorphism.
        let expect = [1, 2, 4, 11, 34, 156];
        for (n, &k) in (1..=6).zip(&expect) {
            assert_eq!(all_graphs(n).unwrap().len(), k, "n = {n}");
        }
    }

    #[test]
    fn two_connected_counts() {
        let by_n: Vec<usize> =
            (3..=6).map(|n| all_graphs(n).unwrap().into_iter().filter(is_two_connected).count()).collect();
        assert_eq!(by_n, vec![1, 3, 10, 56]);
    }

    #[test]
    fn keys_are_invariant() {
        let a = Multigraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        let b = Multigraph::from_edges(4, &[(3, 2), (2, 0), (0, 1), (1, 3), (3, 0)]);
        assert_eq!(graph_key(&a), graph_key(&b));
        assert_ne!(graph_key(&a), graph_key(&Multigraph::cycle(4)));
    }

    #[test]
    fn small_base_sweep() {
        let mut cfg = SweepConfig::new(SweepKind::Base, 4);
        cfg.cross_validate = true;
        let s = run_sweep(&cfg).unwrap();
        assert_eq!(s.graphs, 4);
        assert!(s.mismatches.is_empty(), "{:?}", s.mismatches);
        assert_eq!(s.counts_per_delta["2"], 1);
        assert_eq!(s.counts_per_delta["3"], 2);
        assert_eq!(s.counts_per_delta["4"], 1);
    }

    #[test]
    fn jobs_do_not_change_results() {
        let mut cfg = SweepConfig::new(SweepKind::IndepEquivalence, 5);
        cfg.jobs = Some(1);
        let a = run_sweep(&cfg).unwrap();
        cfg.jobs = Some(3);
        assert_eq!(a, run_sweep(&cfg).unwrap());
    }
}
