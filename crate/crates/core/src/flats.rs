//! Vertex-set flat families of a graph: good flats (facets of the base
//! polytope) and indecomposable flats (the independence-polytope equalities),
//! plus the block count `k(S)` of `G / E(S)`.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::graph::mask::{self, Mask};
use crate::graph::{is_two_connected, EdgeId, Multigraph};
use crate::{Error, Result};

/// Flat enumeration walks all vertex subsets; this bounds `|V|`.
pub const FLAT_VERTEX_LIMIT: usize = 24;

/// A vertex set `S` with `G|S` and `G / E(S)` both 2-connected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodFlat {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    /// `E(S)`, in edge-list order.
    pub induced_edges: Vec<EdgeId>,
    /// `w(E(S))`, filled in by the base checker.
    pub weight_sum: Option<u64>,
}

impl GoodFlat {
    pub fn labels(&self, g: &Multigraph) -> Vec<String> {
        self.vertices.iter().map(|&v| g.label(v).to_string()).collect()
    }
}

fn check_size(g: &Multigraph) -> Result<()> {
    if g.vertex_count() > FLAT_VERTEX_LIMIT {
        return Err(Error::guard("flat enumeration vertex count", FLAT_VERTEX_LIMIT as u64));
    }
    Ok(())
}

/// Subsets of `0..n` with size in `sizes`, ordered by size then
/// lexicographically.
fn subsets_in_order(n: usize, sizes: std::ops::RangeInclusive<usize>) -> impl Iterator<Item = Mask> {
    sizes.flat_map(move |k| (0..n).combinations(k).map(|c| c.iter().fold(0, |m, &v| m | 1 << v)))
}

pub(crate) fn good_flat_masks(adj: &[Mask], n: usize) -> Vec<Mask> {
    let all = mask::full(n);
    if n < 3 {
        return Vec::new();
    }
    subsets_in_order(n, 2..=n - 1)
        .filter(|&s| mask::two_connected(adj, s) && mask::contraction_two_connected(adj, all, s))
        .collect()
}

pub(crate) fn indecomposable_masks(adj: &[Mask], n: usize) -> Vec<Mask> {
    if n < 2 {
        return Vec::new();
    }
    subsets_in_order(n, 2..=n).filter(|&s| mask::two_connected(adj, s)).collect()
}

pub(crate) fn mask_vertices(s: Mask) -> Vec<usize> {
    mask::bits(s).collect()
}

pub(crate) fn induced_edges(g: &Multigraph, s: Mask) -> Vec<EdgeId> {
    g.edges()
        .iter()
        .filter(|e| s >> e.u & 1 == 1 && s >> e.v & 1 == 1)
        .map(|e| e.id)
        .collect()
}

/// All good flats of a 2-connected loopless graph. `S = V` is excluded since
/// contracting everything leaves a single vertex.
pub fn good_flats(g: &Multigraph) -> Result<Vec<GoodFlat>> {
    check_size(g)?;
    if !is_two_connected(g) {
        return Err(Error::NotTwoConnected);
    }
    let adj = mask::adjacency(g);
    Ok(good_flat_masks(&adj, g.vertex_count())
        .into_iter()
        .map(|s| GoodFlat { vertices: mask_vertices(s), induced_edges: induced_edges(g, s), weight_sum: None })
        .collect())
}

/// All vertex sets of size >= 2 inducing a 2-connected subgraph, `V`
/// included when `G` itself is 2-connected.
pub fn indecomposable_flats(g: &Multigraph) -> Result<Vec<Vec<usize>>> {
    check_size(g)?;
    let adj = mask::adjacency(g);
    Ok(indecomposable_masks(&adj, g.vertex_count()).into_iter().map(mask_vertices).collect())
}

/// Number of blocks of `G / E(S)`; zero when `S = V`.
pub fn block_count_after_contraction(g: &Multigraph, s: &[usize]) -> Result<usize> {
    check_size(g)?;
    let adj = mask::adjacency(g);
    let set = s.iter().fold(0u64, |m, &v| m | 1 << v);
    if set == 0 || !mask::connected(&adj, set) {
        return Err(Error::DisconnectedSet);
    }
    Ok(block_count_mask(&adj, g.vertex_count(), set))
}

pub(crate) fn block_count_mask(adj: &[Mask], n: usize, set: Mask) -> usize {
    let all = mask::full(n);
    if set == all {
        return 0;
    }
    let (cadj, cmask) = mask::contract(adj, all, set);
    mask::block_count(&cadj, cmask)
}

#[cfg(test)]
mod tests {
    use super::*;

    // a=0 b=1 c=2 d=3, missing cd
    fn k4_minus_e() -> Multigraph {
        Multigraph::from_labelled_edges(&[("a", "b"), ("a", "c"), ("c", "b"), ("a", "d"), ("d", "b")])
    }

    fn sets(flats: &[GoodFlat], g: &Multigraph) -> Vec<String> {
        flats.iter().map(|f| f.labels(g).concat()).collect()
    }

    #[test]
    fn triangle_good_flats_are_its_edges() {
        let c3 = Multigraph::cycle(3);
        let f = good_flats(&c3).unwrap();
        assert_eq!(sets(&f, &c3), vec!["01", "02", "12"]);
        assert_eq!(f[0].induced_edges, vec![EdgeId(0)]);
    }

    #[test]
    fn k4_has_ten_good_flats() {
        let f = good_flats(&Multigraph::complete(4)).unwrap();
        assert_eq!(f.len(), 10);
        assert_eq!(f.iter().filter(|x| x.vertices.len() == 2).count(), 6);
        assert_eq!(f.iter().filter(|x| x.vertices.len() == 3).count(), 4);
    }

    #[test]
    fn k4_minus_e_excludes_chord() {
        let g = k4_minus_e();
        let f = good_flats(&g).unwrap();
        assert_eq!(sets(&f, &g), vec!["ac", "ad", "bc", "bd", "abc", "abd"]);
    }

    #[test]
    fn indecomposable_examples() {
        assert_eq!(indecomposable_flats(&k4_minus_e()).unwrap().len(), 8);
        assert_eq!(indecomposable_flats(&Multigraph::cycle(3)).unwrap().len(), 4);
        assert_eq!(indecomposable_flats(&Multigraph::path(2)).unwrap(), vec![vec![0, 1]]);
    }

    #[test]
    fn block_counts() {
        let g = k4_minus_e();
        assert_eq!(block_count_after_contraction(&g, &[0, 1]).unwrap(), 2);
        assert_eq!(block_count_after_contraction(&g, &[0, 2, 1]).unwrap(), 1);
        assert_eq!(block_count_after_contraction(&g, &[0, 1, 2, 3]).unwrap(), 0);
        assert_eq!(block_count_after_contraction(&g, &[2, 3]).unwrap_err(), Error::DisconnectedSet);
    }

    #[test]
    fn errors() {
        assert_eq!(good_flats(&Multigraph::path(3)).unwrap_err(), Error::NotTwoConnected);
        assert!(matches!(good_flats(&Multigraph::cycle(25)), Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn good_flats_have_one_block_after_contraction() {
        for g in [Multigraph::complete(5), k4_minus_e(), Multigraph::cycle(6)] {
            for f in good_flats(&g).unwrap() {
                assert_eq!(block_count_after_contraction(&g, &f.vertices).unwrap(), 1);
            }
        }
    }
}
