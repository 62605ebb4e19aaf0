use std::collections::BTreeSet;

use super::Multigraph;

/// True iff `g` has no K4 minor, decided by series-parallel reduction: drop
/// loops, merge parallel edges, delete vertices of degree <= 1 and suppress
/// vertices of degree 2. A graph is K4-minor-free iff this empties it; for a
/// 2-connected graph that is the same as reducing to K2.
pub fn is_k4_minor_free(g: &Multigraph) -> bool {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for e in g.edges() {
        if !e.is_loop() {
            adj[e.u].insert(e.v);
            adj[e.v].insert(e.u);
        }
    }
    let mut alive = vec![true; n];
    let mut remaining = n;
    let mut work: Vec<usize> = (0..n).collect();
    while let Some(x) = work.pop() {
        if !alive[x] || adj[x].len() > 2 {
            continue;
        }
        let nbrs: Vec<usize> = adj[x].iter().copied().collect();
        for &y in &nbrs {
            adj[y].remove(&x);
        }
        if let [u, v] = nbrs[..] {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        adj[x].clear();
        alive[x] = false;
        remaining -= 1;
        work.extend(nbrs);
    }
    remaining == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    /// K4 minor exists iff four disjoint, connected, pairwise adjacent branch
    /// sets exist. Exhaustive over all 5^n assignments.
    pub(crate) fn has_k4_minor_brute(g: &Multigraph) -> bool {
        use crate::graph::mask;
        let n = g.vertex_count();
        let adj = mask::adjacency(g);
        let mut assign = vec![0usize; n];
        loop {
            let mut sets = [0u64; 4];
            for (v, &a) in assign.iter().enumerate() {
                if a < 4 {
                    sets[a] |= 1 << v;
                }
            }
            if sets.iter().all(|&s| s != 0 && mask::connected(&adj, s)) {
                let touches = |a: u64, b: u64| mask::bits(a).any(|v| adj[v] & b != 0);
                let mut ok = true;
                for i in 0..4 {
                    for j in i + 1..4 {
                        ok &= touches(sets[i], sets[j]);
                    }
                }
                if ok {
                    return true;
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    return false;
                }
                assign[i] += 1;
                if assign[i] == 5 {
                    assign[i] = 0;
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }

    #[test]
    fn named_examples() {
        assert!(!is_k4_minor_free(&Multigraph::complete(4)));
        let k4e = Multigraph::from_edges(4, &[(0, 1), (0, 2), (2, 1), (0, 3), (3, 1)]);
        assert!(is_k4_minor_free(&k4e));
        let c5_chord = Multigraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]);
        assert!(is_k4_minor_free(&c5_chord));
        assert!(is_k4_minor_free(&Multigraph::path(2)));
    }

    #[test]
    fn subdivided_k4_is_caught() {
        let g = Multigraph::from_edges(6, &[(0, 4), (4, 1), (0, 2), (0, 3), (1, 2), (1, 5), (5, 3), (2, 3)]);
        assert!(!is_k4_minor_free(&g));
        assert!(has_k4_minor_brute(&g));
    }

    #[test]
    fn wheel_and_prism() {
        let w5 = Multigraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1), (4, 2), (4, 3)]);
        assert!(!is_k4_minor_free(&w5));
        let k23 = Multigraph::from_edges(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]);
        assert!(is_k4_minor_free(&k23));
        assert!(!has_k4_minor_brute(&k23));
    }
}
