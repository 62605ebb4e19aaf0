use serde::{Deserialize, Serialize};

use super::{EdgeId, Multigraph};

/// A maximal path whose inner vertices all have degree 2 in the host graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ear {
    /// Vertex indices `v_0, ..., v_s`, oriented so that `v_0 <= v_s`.
    pub path: Vec<usize>,
    /// Edge ids along the path, `edges[i]` joins `path[i]` and `path[i+1]`.
    pub edges: Vec<EdgeId>,
}

impl Ear {
    /// Number of edges `s`.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn inner(&self) -> &[usize] {
        &self.path[1..self.path.len() - 1]
    }

    pub fn ends(&self) -> (usize, usize) {
        (self.path[0], self.path[self.path.len() - 1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EarDecomposition {
    /// The graph is itself a cycle; it has no ears in this sense.
    Cycle,
    Ears(Vec<Ear>),
}

/// All maximal ears of length >= 2, sorted by vertex path. Edges joining two
/// branch vertices are not reported.
pub fn ears(g: &Multigraph) -> EarDecomposition {
    let deg = g.degrees();
    if g.vertex_count() >= 2 && deg.iter().all(|&d| d == 2) && super::is_connected(g) {
        return EarDecomposition::Cycle;
    }
    let mut incident: Vec<Vec<(usize, EdgeId)>> = vec![Vec::new(); g.vertex_count()];
    for e in g.edges() {
        incident[e.u].push((e.v, e.id));
        if !e.is_loop() {
            incident[e.v].push((e.u, e.id));
        }
    }
    let mut out = Vec::new();
    for start in 0..g.vertex_count() {
        if deg[start] == 2 {
            continue;
        }
        for &(first, first_edge) in &incident[start] {
            if deg[first] != 2 {
                continue;
            }
            let mut path = vec![start, first];
            let mut edges = vec![first_edge];
            let (mut cur, mut via) = (first, first_edge);
            while deg[cur] == 2 {
                let &(next, e) = incident[cur].iter().find(|&&(_, id)| id != via).expect("degree-2 vertex has a second edge");
                path.push(next);
                edges.push(e);
                cur = next;
                via = e;
                if cur == start {
                    break;
                }
            }
            let (a, b) = (path[0], *path.last().unwrap());
            // Each ear is walked from both ends; keep one orientation.
            let keep = a < b || (a == b && edges.first() <= edges.last());
            if keep {
                out.push(Ear { path, edges });
            }
        }
    }
    out.sort_by(|x, y| x.path.cmp(&y.path).then(x.edges.cmp(&y.edges)));
    EarDecomposition::Ears(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4_minus_e() -> Multigraph {
        Multigraph::from_labelled_edges(&[("a", "b"), ("a", "c"), ("c", "b"), ("a", "d"), ("d", "b")])
    }

    fn paths(d: EarDecomposition, g: &Multigraph) -> Vec<Vec<String>> {
        match d {
            EarDecomposition::Cycle => panic!("unexpected cycle"),
            EarDecomposition::Ears(es) => es
                .iter()
                .map(|e| e.path.iter().map(|&v| g.label(v).to_string()).collect())
                .collect(),
        }
    }

    #[test]
    fn k4_minus_e_has_two_ears() {
        let g = k4_minus_e();
        assert_eq!(paths(ears(&g), &g), vec![vec!["a", "c", "b"], vec!["a", "d", "b"]]);
    }

    #[test]
    fn k4_has_none() {
        assert_eq!(ears(&Multigraph::complete(4)), EarDecomposition::Ears(vec![]));
    }

    #[test]
    fn subdivided_chord_adds_third_ear() {
        let g = Multigraph::from_labelled_edges(&[
            ("a", "x"),
            ("x", "b"),
            ("a", "c"),
            ("c", "b"),
            ("a", "d"),
            ("d", "b"),
        ]);
        assert_eq!(
            paths(ears(&g), &g),
            vec![vec!["a", "x", "b"], vec!["a", "c", "b"], vec!["a", "d", "b"]]
        );
    }

    #[test]
    fn cycle_is_flagged() {
        assert_eq!(ears(&Multigraph::cycle(5)), EarDecomposition::Cycle);
    }

    #[test]
    fn long_ear_in_theta_graph() {
        // Theta graph: paths of lengths 1, 2 and 3 between 0 and 1.
        let g = Multigraph::from_edges(5, &[(0, 1), (0, 2), (2, 1), (0, 3), (3, 4), (4, 1)]);
        let EarDecomposition::Ears(es) = ears(&g) else { panic!() };
        assert_eq!(es.len(), 2);
        assert_eq!(es.iter().map(Ear::len).collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(es[1].inner(), &[3, 4]);
    }
}
