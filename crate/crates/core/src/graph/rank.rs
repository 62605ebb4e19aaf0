use super::connectivity::UnionFind;
use super::{EdgeId, Multigraph};

/// Rank of an edge subset in the graphic matroid: `|V(F)|` minus the number
/// of components of `(V(F), F)`. Ids not present in `g` are ignored.
pub fn graphic_rank(g: &Multigraph, subset: &[EdgeId]) -> usize {
    let mut uf = UnionFind::new(g.vertex_count());
    subset
        .iter()
        .filter_map(|&id| g.edge(id))
        .filter(|e| uf.union(e.u, e.v))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_examples() {
        let c3 = Multigraph::cycle(3);
        assert_eq!(graphic_rank(&c3, &c3.edge_ids()), 2);
        let k4 = Multigraph::complete(4);
        // edges 01, 02, 12 form a triangle
        assert_eq!(graphic_rank(&k4, &[EdgeId(0), EdgeId(1), EdgeId(3)]), 2);
        let forest = [EdgeId(0), EdgeId(1), EdgeId(2)];
        assert_eq!(graphic_rank(&k4, &forest), 3);
    }

    #[test]
    fn monotone_and_submodular_exhaustively() {
        let graphs = [
            Multigraph::cycle(5),
            Multigraph::from_edges(4, &[(0, 1), (0, 2), (2, 1), (0, 3), (3, 1)]),
            Multigraph::from_edges(3, &[(0, 1), (0, 1), (1, 2), (2, 0), (2, 0)]),
        ];
        for g in &graphs {
            let ids = g.edge_ids();
            let m = ids.len();
            let subset = |mask: u32| -> Vec<EdgeId> { (0..m).filter(|i| mask >> i & 1 == 1).map(|i| ids[i]).collect() };
            for a in 0u32..(1 << m) {
                let ra = graphic_rank(g, &subset(a));
                assert!(ra <= a.count_ones() as usize);
                for b in 0u32..(1 << m) {
                    let rb = graphic_rank(g, &subset(b));
                    if a & b == a {
                        assert!(ra <= rb);
                    }
                    let union = graphic_rank(g, &subset(a | b));
                    let meet = graphic_rank(g, &subset(a & b));
                    assert!(union + meet <= ra + rb);
                }
            }
        }
    }
}
