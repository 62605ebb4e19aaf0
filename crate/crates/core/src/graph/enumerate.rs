use serde::{Deserialize, Serialize};

use super::connectivity::UnionFind;
use super::{EdgeId, Multigraph};
use crate::{Error, Result};

pub const DEFAULT_ENUMERATION_GUARD: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    /// Maximal spanning forests (bases of the graphic matroid).
    SpanningTrees,
    /// All acyclic edge subsets, the empty set included.
    Forests,
}

/// Enumerates bases or independent sets of the graphic matroid by
/// include/exclude backtracking over the edge list. Subsets are reported as
/// edge ids in edge-list order; the output order is deterministic.
pub fn bases_and_forests(g: &Multigraph, kind: BasisKind, guard: usize) -> Result<Vec<Vec<EdgeId>>> {
    let edges: Vec<(usize, usize, EdgeId)> = g.edges().iter().map(|e| (e.u, e.v, e.id)).collect();
    let full_rank = {
        let mut uf = UnionFind::new(g.vertex_count());
        edges.iter().filter(|&&(u, v, _)| uf.union(u, v)).count()
    };
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let uf = UnionFind::new(g.vertex_count());
    walk(&edges, 0, uf, &mut chosen, kind, full_rank, guard, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    edges: &[(usize, usize, EdgeId)],
    i: usize,
    uf: UnionFind,
    chosen: &mut Vec<EdgeId>,
    kind: BasisKind,
    full_rank: usize,
    guard: usize,
    out: &mut Vec<Vec<EdgeId>>,
) -> Result<()> {
    if kind == BasisKind::SpanningTrees {
        // Prune when the remaining edges cannot reach full rank.
        let mut probe = uf.clone();
        let reachable = chosen.len() + edges[i..].iter().filter(|&&(u, v, _)| probe.union(u, v)).count();
        if reachable < full_rank {
            return Ok(());
        }
    }
    if i == edges.len() {
        if kind == BasisKind::Forests || chosen.len() == full_rank {
            if out.len() >= guard {
                return Err(Error::guard("basis/forest enumeration", guard as u64));
            }
            out.push(chosen.clone());
        }
        return Ok(());
    }
    let (u, v, id) = edges[i];
    let mut with = uf.clone();
    if with.union(u, v) {
        chosen.push(id);
        walk(edges, i + 1, with, chosen, kind, full_rank, guard, out)?;
        chosen.pop();
    }
    walk(edges, i + 1, uf, chosen, kind, full_rank, guard, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cayley_count_for_k4() {
        let t = bases_and_forests(&Multigraph::complete(4), BasisKind::SpanningTrees, 100).unwrap();
        assert_eq!(t.len(), 16);
        assert!(t.iter().all(|b| b.len() == 3));
    }

    #[test]
    fn triangle() {
        let c3 = Multigraph::cycle(3);
        assert_eq!(bases_and_forests(&c3, BasisKind::SpanningTrees, 100).unwrap().len(), 3);
        let f = bases_and_forests(&c3, BasisKind::Forests, 100).unwrap();
        assert_eq!(f.len(), 7);
        assert!(f.contains(&vec![]));
    }

    #[test]
    fn k5_trees_and_guard() {
        assert_eq!(bases_and_forests(&Multigraph::complete(5), BasisKind::SpanningTrees, 1000).unwrap().len(), 125);
        assert!(matches!(
            bases_and_forests(&Multigraph::complete(5), BasisKind::SpanningTrees, 100),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn disconnected_graph_gives_spanning_forests() {
        // Two disjoint triangles: 3 * 3 maximal forests of size 4.
        let g = Multigraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        let t = bases_and_forests(&g, BasisKind::SpanningTrees, 100).unwrap();
        assert_eq!(t.len(), 9);
        assert!(t.iter().all(|b| b.len() == 4));
    }

    #[test]
    fn doubled_edge_has_two_bases() {
        let g = Multigraph::from_edges(2, &[(0, 1), (0, 1)]);
        assert_eq!(bases_and_forests(&g, BasisKind::SpanningTrees, 10).unwrap().len(), 2);
        assert_eq!(bases_and_forests(&g, BasisKind::Forests, 10).unwrap().len(), 3);
    }
}
