//! Exact multigraph representation and the combinatorial primitives used by
//! the checkers: connectivity, blocks, minors, ears, chordless cycles,
//! series-parallel reduction, basis enumeration and blow-up factoring.

mod blowup;
mod connectivity;
mod cycles;
mod ears;
mod enumerate;
mod iso;
pub(crate) mod mask;
mod minor;
mod parse;
mod rank;
mod series_parallel;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use blowup::{blow_up, blow_up_factor, BlowUpFactor};
pub use connectivity::{articulation_points, blocks, component_count, is_connected, is_two_connected};
pub use cycles::{chordless_cycles, chordless_cycles_with};
pub use ears::{ears, Ear, EarDecomposition};
pub use enumerate::{bases_and_forests, BasisKind, DEFAULT_ENUMERATION_GUARD};
pub use iso::{fingerprint, isomorphism, IsoOutcome, ISO_VERTEX_LIMIT};
pub use minor::{minor_op, Contraction, MinorKind};
pub use parse::parse_graph;
pub use rank::graphic_rank;
pub use series_parallel::is_k4_minor_free;

/// Stable edge identifier. Ids are never reused after deletion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// An edge between two vertex indices. `u == v` is a loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite to `x`.
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    pub(crate) fn key(&self) -> (usize, usize) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

/// A finite undirected multigraph with labelled vertices.
///
/// Vertices are addressed by dense indices `0..vertex_count()` in
/// first-appearance order; each carries a unique label.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multigraph {
    labels: Vec<String>,
    edges: Vec<Edge>,
    loops_removed: usize,
    next_id: u32,
}

impl Multigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph on vertices labelled `0..n` with the given edges; edge ids follow
    /// list order.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Multigraph::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn with_vertices(n: usize) -> Self {
        Multigraph {
            labels: (0..n).map(|i| i.to_string()).collect(),
            ..Self::default()
        }
    }

    /// Builds a graph from label pairs; vertex order is first appearance.
    pub fn from_labelled_edges<S: AsRef<str>>(edges: &[(S, S)]) -> Self {
        let mut g = Multigraph::new();
        let mut index = HashMap::new();
        for (a, b) in edges {
            let u = g.intern(&mut index, a.as_ref());
            let v = g.intern(&mut index, b.as_ref());
            g.add_edge(u, v);
        }
        g
    }

    pub(crate) fn intern(&mut self, index: &mut HashMap<String, usize>, label: &str) -> usize {
        if let Some(&i) = index.get(label) {
            return i;
        }
        let i = self.add_vertex(label);
        index.insert(label.to_string(), i);
        i
    }

    /// Appends a vertex. The caller keeps labels unique.
    pub fn add_vertex(&mut self, label: impl Into<String>) -> usize {
        self.labels.push(label.into());
        self.labels.len() - 1
    }

    /// Appends a fresh vertex with an unused label.
    pub fn add_fresh_vertex(&mut self) -> usize {
        let mut k = self.labels.len();
        loop {
            let candidate = format!("n{k}");
            if !self.labels.contains(&candidate) {
                return self.add_vertex(candidate);
            }
            k += 1;
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> EdgeId {
        assert!(u < self.labels.len() && v < self.labels.len(), "endpoint out of range");
        let id = EdgeId(self.next_id);
        self.next_id += 1;
        self.edges.push(Edge { id, u, v });
        id
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> Option<Edge> {
        let pos = self.edges.iter().position(|e| e.id == id)?;
        Some(self.edges.remove(pos))
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub(crate) fn edge_or_err(&self, id: EdgeId) -> crate::Result<&Edge> {
        self.edge(id).ok_or(crate::Error::UnknownEdge(id))
    }

    pub fn edge_ids(&self) -> Vec<EdgeId> {
        self.edges.iter().map(|e| e.id).collect()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn loops_removed(&self) -> usize {
        self.loops_removed
    }

    pub(crate) fn add_loops_removed(&mut self, k: usize) {
        self.loops_removed += k;
    }

    pub fn next_edge_id(&self) -> EdgeId {
        EdgeId(self.next_id)
    }

    /// Degree counting edge incidences; a loop contributes two.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.u == v) + usize::from(e.v == v))
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count()];
        for e in &self.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(Edge::is_loop)
    }

    /// No loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().all(|e| !e.is_loop() && seen.insert(e.key()))
    }

    /// Number of edges joining `u` and `v`.
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        let key = (u.min(v), u.max(v));
        self.edges.iter().filter(|e| e.key() == key).count()
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<EdgeId> {
        let key = (u.min(v), u.max(v));
        self.edges.iter().find(|e| e.key() == key).map(|e| e.id)
    }

    /// Neighbour lists of the underlying simple graph (loops dropped).
    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for e in &self.edges {
            if e.is_loop() {
                continue;
            }
            if !adj[e.u].contains(&e.v) {
                adj[e.u].push(e.v);
                adj[e.v].push(e.u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Removes all loops, recording how many were stripped.
    pub fn normalize(&self) -> Multigraph {
        let mut g = self.clone();
        let before = g.edges.len();
        g.edges.retain(|e| !e.is_loop());
        g.loops_removed += before - g.edges.len();
        g
    }

    /// Subgraph induced on `vertices` (given as indices, any order). Vertex
    /// order and edge ids are inherited from `self`.
    pub fn induced(&self, vertices: &[usize]) -> Multigraph {
        let mut keep = vec![false; self.vertex_count()];
        for &v in vertices {
            keep[v] = true;
        }
        self.restrict(&keep, |e| keep[e.u] && keep[e.v])
    }

    /// Subgraph formed by the given edges and their endpoints.
    pub fn edge_subgraph(&self, ids: &[EdgeId]) -> Multigraph {
        let wanted: std::collections::HashSet<EdgeId> = ids.iter().copied().collect();
        let mut keep = vec![false; self.vertex_count()];
        for e in &self.edges {
            if wanted.contains(&e.id) {
                keep[e.u] = true;
                keep[e.v] = true;
            }
        }
        self.restrict(&keep, |e| wanted.contains(&e.id))
    }

    fn restrict(&self, keep: &[bool], mut edge_filter: impl FnMut(&Edge) -> bool) -> Multigraph {
        let mut map = vec![usize::MAX; self.vertex_count()];
        let mut labels = Vec::new();
        for (v, &k) in keep.iter().enumerate() {
            if k {
                map[v] = labels.len();
                labels.push(self.labels[v].clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| edge_filter(e))
            .map(|e| Edge { id: e.id, u: map[e.u], v: map[e.v] })
            .collect();
        Multigraph { labels, edges, loops_removed: 0, next_id: self.next_id }
    }

    /// Copy with edges renumbered `0..m` in list order.
    pub fn with_compact_ids(&self) -> Multigraph {
        let mut g = self.clone();
        for (i, e) in g.edges.iter_mut().enumerate() {
            e.id = EdgeId(i as u32);
        }
        g.next_id = g.edges.len() as u32;
        g
    }

    /// Copy with vertices relabelled `0..n`.
    pub fn with_index_labels(&self) -> Multigraph {
        let mut g = self.clone();
        g.labels = (0..g.vertex_count()).map(|i| i.to_string()).collect();
        g
    }

    /// Edge-list text in the shared input format.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            out.push_str(&self.labels[e.u]);
            out.push(' ');
            out.push_str(&self.labels[e.v]);
            out.push('\n');
        }
        out
    }

    /// Sorted multiset of vertex-index pairs; equal keys mean equal graphs
    /// on the same vertex indexing.
    pub fn edge_key_multiset(&self) -> Vec<(usize, usize)> {
        let mut keys: Vec<_> = self.edges.iter().map(Edge::key).collect();
        keys.sort_unstable();
        keys
    }

    /// Graphviz rendering; `colour` may assign a colour per edge.
    pub fn to_dot(&self, colour: impl Fn(&Edge) -> Option<String>) -> String {
        let mut out = String::from("graph G {\n");
        for l in &self.labels {
            out.push_str(&format!("  \"{l}\";\n"));
        }
        for e in &self.edges {
            let attr = match colour(e) {
                Some(c) => format!(" [color=\"{c}\", label=\"{}\"]", e.id),
                None => format!(" [label=\"{}\"]", e.id),
            };
            out.push_str(&format!(
                "  \"{}\" -- \"{}\"{attr};\n",
                self.labels[e.u], self.labels[e.v]
            ));
        }
        out.push_str("}\n");
        out
    }

    // Named graphs used throughout tests, generators and the CLI.

    pub fn cycle(n: usize) -> Multigraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Multigraph::from_edges(n, &edges)
    }

    pub fn complete(n: usize) -> Multigraph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Multigraph::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Multigraph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Multigraph::from_edges(n, &edges)
    }
}
