//! Bitmask routines over the underlying simple graph. Parallel edges never
//! change vertex connectivity, so 2-connectivity questions on multigraphs
//! reduce to these.

use super::Multigraph;

pub(crate) type Mask = u64;

pub(crate) const MAX_MASK_VERTICES: usize = 64;

pub(crate) fn adjacency(g: &Multigraph) -> Vec<Mask> {
    assert!(g.vertex_count() <= MAX_MASK_VERTICES);
    let mut adj = vec![0; g.vertex_count()];
    for e in g.edges() {
        if !e.is_loop() {
            adj[e.u] |= 1 << e.v;
            adj[e.v] |= 1 << e.u;
        }
    }
    adj
}

pub(crate) fn full(n: usize) -> Mask {
    if n == 64 {
        !0
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

pub(crate) fn connected(adj: &[Mask], mask: Mask) -> bool {
    if mask == 0 {
        return false;
    }
    let start = mask & mask.wrapping_neg();
    let mut seen = start;
    let mut frontier = start;
    while frontier != 0 {
        let mut next = 0;
        for v in bits(frontier) {
            next |= adj[v];
        }
        next &= mask & !seen;
        seen |= next;
        frontier = next;
    }
    seen == mask
}

/// Induced subgraph on `mask` is 2-connected (>= 2 vertices, connected, no
/// cut vertex).
pub(crate) fn two_connected(adj: &[Mask], mask: Mask) -> bool {
    let k = mask.count_ones();
    if k < 2 || !connected(adj, mask) {
        return false;
    }
    k == 2 || bits(mask).all(|v| connected(adj, mask & !(1 << v)))
}

/// Adjacency after merging `set` into its lowest vertex; returns the new
/// adjacency (same indexing, merged vertices other than the representative
/// become isolated and are excluded from the returned mask).
pub(crate) fn contract(adj: &[Mask], all: Mask, set: Mask) -> (Vec<Mask>, Mask) {
    let rep = set.trailing_zeros() as usize;
    let rep_bit = 1u64 << rep;
    let mut out = vec![0; adj.len()];
    let mut rep_adj = 0;
    for v in bits(set) {
        rep_adj |= adj[v];
    }
    out[rep] = rep_adj & all & !set;
    for v in bits(all & !set) {
        let a = adj[v] & all;
        out[v] = (a & !set) | if a & set != 0 { rep_bit } else { 0 };
    }
    (out, (all & !set) | rep_bit)
}

/// `G / E(S)` is 2-connected, for `S` inducing a connected subgraph.
pub(crate) fn contraction_two_connected(adj: &[Mask], all: Mask, set: Mask) -> bool {
    let (cadj, cmask) = contract(adj, all, set);
    two_connected(&cadj, cmask)
}

/// Number of blocks of the induced subgraph on `mask`, isolated vertices
/// ignored.
pub(crate) fn block_count(adj: &[Mask], mask: Mask) -> usize {
    let n = adj.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut timer = 0;
    let mut count = 0;
    fn dfs(
        adj: &[Mask],
        mask: Mask,
        v: usize,
        parent: usize,
        disc: &mut [usize],
        low: &mut [usize],
        timer: &mut usize,
        count: &mut usize,
    ) {
        disc[v] = *timer;
        low[v] = *timer;
        *timer += 1;
        for w in bits(adj[v] & mask) {
            if w == parent {
                continue;
            }
            if disc[w] == usize::MAX {
                dfs(adj, mask, w, v, disc, low, timer, count);
                low[v] = low[v].min(low[w]);
                if low[w] >= disc[v] {
                    *count += 1;
                }
            } else {
                low[v] = low[v].min(disc[w]);
            }
        }
    }
    for v in bits(mask) {
        if disc[v] == usize::MAX {
            dfs(adj, mask, v, usize::MAX, &mut disc, &mut low, &mut timer, &mut count);
        }
    }
    count
}
