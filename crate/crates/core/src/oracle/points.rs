//! Lattice points of dilates, Ehrhart `h*`-vectors and the normality probe.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::linalg::{add, mul};
use super::{GorensteinWitness, LatticePolytope};
use crate::{Error, Result};

pub const DEFAULT_NODE_GUARD: u64 = 10_000_000;

/// Walks the lattice points of `kP` in lattice coordinates (height `k`),
/// coordinate by coordinate inside `k` times the vertex bounding box,
/// pruning with each facet's best-case remaining contribution.
fn walk(p: &LatticePolytope, k: i128, guard: u64, visit: &mut dyn FnMut(&[i128]) -> Result<()>) -> Result<()> {
    if p.facet_method.is_none() {
        return Err(Error::pre("facets not computed"));
    }
    let d = p.dim + 1;
    if p.dim == 0 {
        return visit(&[k]);
    }
    let mut lo = vec![k; d];
    let mut hi = vec![k; d];
    for j in 1..d {
        let min = p.lattice_vertices.iter().map(|v| v[j]).min().unwrap();
        let max = p.lattice_vertices.iter().map(|v| v[j]).max().unwrap();
        lo[j] = mul(k, min)?;
        hi[j] = mul(k, max)?;
    }
    let normals: Vec<&[i128]> = p.facets.iter().map(|f| f.normal.as_slice()).collect();
    // suffix[f][j] = max over the box of sum_{t >= j} h_t y_t
    let mut suffix = vec![vec![0i128; d + 1]; normals.len()];
    for (f, h) in normals.iter().enumerate() {
        for j in (1..d).rev() {
            let best = mul(h[j], lo[j])?.max(mul(h[j], hi[j])?);
            suffix[f][j] = add(suffix[f][j + 1], best)?;
        }
    }
    let partial: Vec<i128> = normals.iter().map(|h| mul(h[0], k)).collect::<Result<_>>()?;
    let mut y = vec![0i128; d];
    y[0] = k;
    let mut nodes = 0u64;
    rec(1, &mut y, &partial, &normals, &suffix, &lo, &hi, &mut nodes, guard, visit)
}

#[allow(clippy::too_many_arguments)]
fn rec(
    j: usize,
    y: &mut Vec<i128>,
    partial: &[i128],
    normals: &[&[i128]],
    suffix: &[Vec<i128>],
    lo: &[i128],
    hi: &[i128],
    nodes: &mut u64,
    guard: u64,
    visit: &mut dyn FnMut(&[i128]) -> Result<()>,
) -> Result<()> {
    *nodes += 1;
    if *nodes > guard {
        return Err(Error::guard("lattice point enumeration nodes", guard));
    }
    if j == y.len() {
        if partial.iter().all(|&s| s >= 0) {
            visit(y)?;
        }
        return Ok(());
    }
    let mut next = partial.to_vec();
    for val in lo[j]..=hi[j] {
        let mut ok = true;
        for (f, h) in normals.iter().enumerate() {
            next[f] = add(partial[f], mul(h[j], val)?)?;
            if add(next[f], suffix[f][j + 1])? < 0 {
                ok = false;
            }
        }
        if ok {
            y[j] = val;
            rec(j + 1, y, &next, normals, suffix, lo, hi, nodes, guard, visit)?;
        }
    }
    Ok(())
}

/// Lattice points of `kP`, in lattice coordinates (height `k` first).
pub fn lattice_points(p: &LatticePolytope, k: u32, guard: u64) -> Result<Vec<Vec<i128>>> {
    let mut out = Vec::new();
    walk(p, i128::from(k), guard, &mut |y| {
        out.push(y.to_vec());
        Ok(())
    })?;
    Ok(out)
}

pub fn count_lattice_points(p: &LatticePolytope, k: u32, guard: u64) -> Result<u64> {
    let mut n = 0u64;
    walk(p, i128::from(k), guard, &mut |_| {
        n += 1;
        Ok(())
    })?;
    Ok(n)
}

/// Reference search straight from the definition: the first `δ ≤ max_delta`
/// with a lattice point `v ∈ δP` at which every facet equation is 1.
pub fn gorenstein_search_enumerative(p: &LatticePolytope, max_delta: u32, guard: u64) -> Result<Option<GorensteinWitness>> {
    for delta in 1..=max_delta {
        let mut hit = None;
        walk(p, i128::from(delta), guard, &mut |y| {
            if hit.is_none() && p.facets.iter().all(|f| f.eval(y).is_ok_and(|v| v == 1)) {
                hit = Some(y.to_vec());
            }
            Ok(())
        })?;
        if let Some(y) = hit {
            let (_, point) = p.to_ambient(&y)?;
            return Ok(Some(GorensteinWitness { delta, point, lattice_point: y, any_delta: p.dim == 0 }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HStarVector {
    /// `h*_0 .. h*_s`, trailing zeros trimmed.
    pub coefficients: Vec<i128>,
    pub palindromic: bool,
    /// Ehrhart values `L(0) .. L(d)` used.
    pub ehrhart: Vec<u64>,
}

impl HStarVector {
    /// Sum of coefficients: the normalized volume.
    pub fn volume(&self) -> i128 {
        self.coefficients.iter().sum()
    }
}

fn binomial(n: u64, k: u64) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * i128::from(n - i) / i128::from(i + 1))
}

/// `h*_i = Σ_j (-1)^j C(d+1, j) L(i-j)` from the counts of `kP`,
/// `k = 0..d`.
pub fn hstar(p: &LatticePolytope, guard: u64) -> Result<HStarVector> {
    let d = p.dim as u64;
    let ehrhart = (0..=d).map(|k| count_lattice_points(p, k as u32, guard)).collect::<Result<Vec<_>>>()?;
    let mut coefficients = Vec::new();
    for i in 0..=d {
        let mut s = 0i128;
        for j in 0..=i {
            let term = mul(binomial(d + 1, j), i128::from(ehrhart[(i - j) as usize]))?;
            s = if j % 2 == 0 { add(s, term)? } else { add(s, -term)? };
        }
        coefficients.push(s);
    }
    while coefficients.len() > 1 && *coefficients.last().unwrap() == 0 {
        coefficients.pop();
    }
    if coefficients[0] != 1 || coefficients.iter().any(|&c| c < 0) {
        return Err(Error::Inconsistency(format!("invalid h*-vector {coefficients:?}")));
    }
    let palindromic = coefficients.iter().eq(coefficients.iter().rev());
    Ok(HStarVector { coefficients, palindromic, ehrhart })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Normality {
    /// `(k, #kP ∩ lattice)` for every checked `k`.
    Pass { checked: Vec<(u32, u64)> },
    Counterexample { k: u32, point: Vec<i128> },
}

/// Checks that every lattice point of `kP`, `2 <= k <= kmax`, is a sum of
/// `k` lattice points of `P`, via iterated sumsets.
pub fn normality_probe(p: &LatticePolytope, kmax: u32, guard: u64) -> Result<Normality> {
    if kmax < 2 {
        return Err(Error::pre("normality probe needs kmax >= 2"));
    }
    let base = lattice_points(p, 1, guard)?;
    let mut sums: HashSet<Vec<i128>> = base.iter().cloned().collect();
    let mut checked = Vec::new();
    for k in 2..=kmax {
        let mut next = HashSet::with_capacity(sums.len() * 2);
        for s in &sums {
            for b in &base {
                next.insert(s.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>());
            }
            if next.len() as u64 > guard {
                return Err(Error::guard("normality sumset size", guard));
            }
        }
        sums = next;
        let points = lattice_points(p, k, guard)?;
        if let Some(y) = points.iter().find(|y| !sums.contains(*y)) {
            return Ok(Normality::Counterexample { k, point: y.clone() });
        }
        checked.push((k, points.len() as u64));
    }
    Ok(Normality::Pass { checked })
}
