use serde::{Deserialize, Serialize};

use super::mask;
use super::{blocks, Multigraph};

/// Brute-force isomorphism is attempted only up to this many vertices.
pub const ISO_VERTEX_LIMIT: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum IsoOutcome {
    /// `mapping[v]` is the vertex of the second graph matched to `v`.
    Isomorphic { mapping: Vec<usize> },
    NotIsomorphic,
    /// Beyond the brute-force limit: invariants agree, no isomorphism proven.
    FingerprintMatch,
    FingerprintMismatch,
}

impl IsoOutcome {
    /// True for a proven isomorphism or, past the size limit, a matching
    /// fingerprint.
    pub fn accepted(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic { .. } | IsoOutcome::FingerprintMatch)
    }
}

/// Invariants compared when graphs are too large for brute force.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub vertices: usize,
    pub edges: usize,
    pub degrees: Vec<usize>,
    /// `(vertices, edges)` per block, sorted.
    pub blocks: Vec<(usize, usize)>,
    /// Good flats counted by size; empty unless the graph is 2-connected and
    /// small enough to enumerate.
    pub good_flat_census: Vec<usize>,
}

pub fn fingerprint(g: &Multigraph) -> Fingerprint {
    let mut degrees = g.degrees();
    degrees.sort_unstable();
    let mut bl: Vec<_> = blocks(g).iter().map(|b| (b.vertex_count(), b.edge_count())).collect();
    bl.sort_unstable();
    let n = g.vertex_count();
    let mut census = Vec::new();
    if n <= 16 && super::is_two_connected(g) {
        let adj = mask::adjacency(g);
        let all = mask::full(n);
        census = vec![0; n + 1];
        for s in 1..all {
            if mask::two_connected(&adj, s) && mask::contraction_two_connected(&adj, all, s) {
                census[s.count_ones() as usize] += 1;
            }
        }
    }
    Fingerprint { vertices: n, edges: g.edge_count(), degrees, blocks: bl, good_flat_census: census }
}

/// Decides isomorphism of two loop-free multigraphs (edge multiplicities
/// must match), by backtracking for up to [`ISO_VERTEX_LIMIT`] vertices and
/// by fingerprint beyond.
pub fn isomorphism(a: &Multigraph, b: &Multigraph) -> IsoOutcome {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return IsoOutcome::NotIsomorphic;
    }
    let n = a.vertex_count();
    if n > ISO_VERTEX_LIMIT {
        return if fingerprint(a) == fingerprint(b) {
            IsoOutcome::FingerprintMatch
        } else {
            IsoOutcome::FingerprintMismatch
        };
    }
    let ma = multiplicities(a);
    let mb = multiplicities(b);
    let (da, db) = (a.degrees(), b.degrees());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(da[v]));
    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if assign(0, &order, &ma, &mb, &da, &db, &mut mapping, &mut used) {
        IsoOutcome::Isomorphic { mapping }
    } else {
        IsoOutcome::NotIsomorphic
    }
}

fn multiplicities(g: &Multigraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut m = vec![vec![0; n]; n];
    for e in g.edges() {
        m[e.u][e.v] += 1;
        if e.u != e.v {
            m[e.v][e.u] += 1;
        }
    }
    m
}

#[allow(clippy::too_many_arguments)]
fn assign(
    k: usize,
    order: &[usize],
    ma: &[Vec<usize>],
    mb: &[Vec<usize>],
    da: &[usize],
    db: &[usize],
    mapping: &mut [usize],
    used: &mut [bool],
) -> bool {
    if k == order.len() {
        return true;
    }
    let v = order[k];
    for w in 0..order.len() {
        if used[w] || da[v] != db[w] || ma[v][v] != mb[w][w] {
            continue;
        }
        let consistent = order[..k].iter().all(|&x| ma[v][x] == mb[w][mapping[x]]);
        if !consistent {
            continue;
        }
        mapping[v] = w;
        used[w] = true;
        if assign(k + 1, order, ma, mb, da, db, mapping, used) {
            return true;
        }
        used[w] = false;
        mapping[v] = usize::MAX;
    }
    false
}
