use serde::{Deserialize, Serialize};

use super::{Edge, EdgeId, Multigraph};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MinorKind {
    Delete,
    Contract,
}

/// Result of merging a vertex set into one vertex.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: Multigraph,
    /// `vertex_map[old] = new` for every vertex of the source graph.
    pub vertex_map: Vec<usize>,
    /// Index of the merged vertex in `graph`.
    pub merged: usize,
}

/// Deletes or contracts edge `e`. Contraction keeps resulting parallel
/// edges and strips (and counts) resulting loops.
pub fn minor_op(g: &Multigraph, e: EdgeId, kind: MinorKind) -> Result<Multigraph> {
    let edge = *g.edge_or_err(e)?;
    Ok(match kind {
        MinorKind::Delete => {
            let mut h = g.clone();
            h.remove_edge(e);
            h
        }
        MinorKind::Contract => {
            let mut h = g.clone();
            h.remove_edge(e);
            if edge.is_loop() {
                h
            } else {
                Multigraph::contract_set(&h, &[edge.u, edge.v]).graph
            }
        }
    })
}

impl Multigraph {
    /// Merges `set` (vertex indices) into a single vertex placed at the
    /// smallest index of the set; edges inside the set become loops and are
    /// removed. The merged label joins the original labels with `+`.
    pub fn contract_set(g: &Multigraph, set: &[usize]) -> Contraction {
        let n = g.vertex_count();
        let mut in_set = vec![false; n];
        for &v in set {
            in_set[v] = true;
        }
        let rep = match set.iter().min() {
            Some(&r) => r,
            None => {
                return Contraction { graph: g.clone(), vertex_map: (0..n).collect(), merged: usize::MAX };
            }
        };
        let mut vertex_map = vec![0; n];
        let mut labels = Vec::with_capacity(n);
        let mut merged = 0;
        for v in 0..n {
            if in_set[v] && v != rep {
                continue;
            }
            if v == rep {
                merged = labels.len();
                let parts: Vec<&str> = (0..n).filter(|&x| in_set[x]).map(|x| g.label(x)).collect();
                labels.push(parts.join("+"));
            } else {
                labels.push(g.label(v).to_string());
            }
            vertex_map[v] = labels.len() - 1;
        }
        for v in 0..n {
            if in_set[v] {
                vertex_map[v] = merged;
            }
        }
        let mut graph = Multigraph::new();
        for l in labels {
            graph.add_vertex(l);
        }
        let mut loops = 0;
        let mut max_id = 0;
        for e in g.edges() {
            max_id = max_id.max(e.id.0 + 1);
            let (u, v) = (vertex_map[e.u], vertex_map[e.v]);
            if u == v {
                loops += 1;
            } else {
                graph.push_edge(Edge { id: e.id, u, v });
            }
        }
        graph.set_next_id(g.next_edge_id().0.max(max_id));
        graph.add_loops_removed(g.loops_removed() + loops);
        Contraction { graph, vertex_map, merged }
    }

    pub(crate) fn push_edge(&mut self, e: Edge) {
        self.edges.push(e);
    }

    pub(crate) fn set_next_id(&mut self, next: u32) {
        self.next_id = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{blocks, is_two_connected};

    // K4 minus the edge cd, with a=0, b=1, c=2, d=3; edge ab has id 0.
    fn k4_minus_e() -> Multigraph {
        Multigraph::from_labelled_edges(&[("a", "b"), ("a", "c"), ("c", "b"), ("a", "d"), ("d", "b")])
    }

    #[test]
    fn delete_chord_gives_four_cycle() {
        let g = minor_op(&k4_minus_e(), EdgeId(0), MinorKind::Delete).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert!(is_two_connected(&g));
        assert!(g.degrees().iter().all(|&d| d == 2));
        assert_eq!(g.edge_between(0, 1), None);
    }

    #[test]
    fn contract_chord_leaves_cut_vertex() {
        let g = minor_op(&k4_minus_e(), EdgeId(0), MinorKind::Contract).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.label(0), "a+b");
        assert_eq!(g.multiplicity(0, 1), 2);
        assert_eq!(g.multiplicity(0, 2), 2);
        assert!(!is_two_connected(&g));
        assert_eq!(blocks(&g).len(), 2);
    }

    #[test]
    fn contract_triangle_edge() {
        let g = minor_op(&Multigraph::cycle(3), EdgeId(0), MinorKind::Contract).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.multiplicity(0, 1), 2);
        assert!(is_two_connected(&g));
    }

    #[test]
    fn contraction_counts_new_loops() {
        // Two parallel edges: contracting one turns the other into a loop.
        let g = Multigraph::from_edges(2, &[(0, 1), (0, 1)]);
        let h = minor_op(&g, EdgeId(0), MinorKind::Contract).unwrap();
        assert_eq!(h.vertex_count(), 1);
        assert_eq!(h.edge_count(), 0);
        assert_eq!(h.loops_removed(), 1);
    }

    #[test]
    fn unknown_edge() {
        assert_eq!(
            minor_op(&Multigraph::cycle(3), EdgeId(9), MinorKind::Delete).unwrap_err(),
            crate::Error::UnknownEdge(EdgeId(9))
        );
    }
}
