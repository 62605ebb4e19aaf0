use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Edge, Multigraph};
use crate::{Error, Result};

/// A multigraph written as the `multiplicity`-fold blow-up of a simple graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowUpFactor {
    pub multiplicity: usize,
    pub base_graph: Multigraph,
}

/// Factors `g` as a uniform blow-up: present iff every parallel class has the
/// same size `m`. The base graph keeps the first edge of each class. Loops
/// are ignored; callers normalize first.
pub fn blow_up_factor(g: &Multigraph) -> Option<BlowUpFactor> {
    let mut classes: BTreeMap<(usize, usize), Vec<&Edge>> = BTreeMap::new();
    for e in g.edges().iter().filter(|e| !e.is_loop()) {
        classes.entry(e.key()).or_default().push(e);
    }
    let m = classes.values().next()?.len();
    if classes.values().any(|c| c.len() != m) {
        return None;
    }
    let mut base = g.clone();
    let keep: std::collections::HashSet<_> = classes.values().map(|c| c[0].id).collect();
    for id in g.edge_ids() {
        if !keep.contains(&id) {
            base.remove_edge(id);
        }
    }
    Some(BlowUpFactor { multiplicity: m, base_graph: base })
}

/// Replaces every edge by `m` parallel copies. The first copy keeps the
/// original id.
pub fn blow_up(h: &Multigraph, m: usize) -> Result<Multigraph> {
    if m < 1 {
        return Err(Error::pre(format!("blow-up multiplicity must be >= 1, got {m}")));
    }
    let mut g = h.clone();
    for e in h.edges() {
        for _ in 1..m {
            g.add_edge(e.u, e.v);
        }
    }
    // Keep copies adjacent to their original in the edge list.
    let order: Vec<_> = h.edges().iter().map(|e| e.key()).collect();
    let mut edges: Vec<Edge> = g.edges().to_vec();
    edges.sort_by_key(|e| (order.iter().position(|&k| k == e.key()).unwrap(), e.id));
    let mut out = Multigraph::new();
    for l in h.labels() {
        out.add_vertex(l.clone());
    }
    for e in edges {
        out.push_edge(e);
    }
    out.set_next_id(g.next_edge_id().0);
    out.add_loops_removed(h.loops_removed());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubled_cycle() {
        let g = blow_up(&Multigraph::cycle(4), 2).unwrap();
        assert_eq!(g.edge_count(), 8);
        let f = blow_up_factor(&g).unwrap();
        assert_eq!(f.multiplicity, 2);
        assert_eq!(f.base_graph.edge_key_multiset(), Multigraph::cycle(4).edge_key_multiset());
    }

    #[test]
    fn simple_graph_is_its_own_base() {
        let f = blow_up_factor(&Multigraph::cycle(3)).unwrap();
        assert_eq!(f.multiplicity, 1);
        assert_eq!(f.base_graph, Multigraph::cycle(3));
    }

    #[test]
    fn non_uniform_multiplicity() {
        let g = Multigraph::from_edges(3, &[(0, 1), (0, 1), (1, 2), (2, 0)]);
        assert_eq!(blow_up_factor(&g), None);
    }

    #[test]
    fn identity_and_rejection() {
        let h = Multigraph::complete(4);
        assert_eq!(blow_up(&h, 1).unwrap(), h);
        assert!(blow_up(&h, 0).is_err());
        assert_eq!(blow_up_factor(&Multigraph::with_vertices(3)), None);
    }
}
