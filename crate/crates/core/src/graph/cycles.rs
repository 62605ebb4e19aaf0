use super::mask::{self, Mask, MAX_MASK_VERTICES};
use super::Multigraph;
use crate::{Error, Result};

/// Lengths of all chordless (induced) cycles of the underlying simple graph,
/// sorted ascending. Fails once more than `guard` cycles are found.
pub fn chordless_cycles(g: &Multigraph, guard: usize) -> Result<Vec<usize>> {
    chordless_cycles_with(g, guard, false)
}

/// As [`chordless_cycles`]; with `parallel_pairs` set, every vertex pair
/// joined by two or more edges additionally counts as one 2-cycle.
pub fn chordless_cycles_with(g: &Multigraph, guard: usize, parallel_pairs: bool) -> Result<Vec<usize>> {
    if g.vertex_count() > MAX_MASK_VERTICES {
        return Err(Error::guard("chordless cycle search vertex count", MAX_MASK_VERTICES as u64));
    }
    let adj = mask::adjacency(g);
    let mut out = Vec::new();
    if parallel_pairs {
        let mut pairs: Vec<_> = g.edges().iter().filter(|e| !e.is_loop()).map(|e| e.key()).collect();
        pairs.sort_unstable();
        let mut i = 0;
        while i < pairs.len() {
            let j = pairs[i..].iter().take_while(|&&p| p == pairs[i]).count();
            if j >= 2 {
                out.push(2);
            }
            i += j;
        }
    }
    for s in 0..g.vertex_count() {
        let mut path = vec![s];
        extend(&adj, s, &mut path, 1 << s, &mut out, guard)?;
    }
    if out.len() > guard {
        return Err(Error::guard("chordless cycle count", guard as u64));
    }
    out.sort_unstable();
    Ok(out)
}

// Grows induced paths from `s` through vertices larger than `s`; closes a
// cycle when the new vertex sees `s`. Each cycle is recorded once, in the
// direction where the second vertex is smaller than the last.
fn extend(adj: &[Mask], s: usize, path: &mut Vec<usize>, on_path: Mask, out: &mut Vec<usize>, guard: usize) -> Result<()> {
    let last = *path.last().unwrap();
    let before_last = on_path & !(1 << last);
    for w in mask::bits(adj[last]) {
        if w <= s || on_path & (1 << w) != 0 {
            continue;
        }
        let touches = adj[w] & before_last;
        if path.len() >= 2 && touches & (1 << s) != 0 {
            if touches == 1 << s && path[1] < w {
                out.push(path.len() + 1);
                if out.len() > guard {
                    return Err(Error::guard("chordless cycle count", guard as u64));
                }
            }
            continue;
        }
        if touches != 0 && path.len() >= 2 {
            continue;
        }
        path.push(w);
        extend(adj, s, path, on_path | (1 << w), out, guard)?;
        path.pop();
    }
    Ok(())
}
