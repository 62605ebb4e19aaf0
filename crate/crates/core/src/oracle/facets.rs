//! Facet enumeration in lattice coordinates: a subset-spanning brute force
//! and an integer double-description method. Both return primitive inward
//! normals `h` with `h(y) >= 0` on the cone over the polytope.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::linalg::{dot, kernel_vector, make_primitive, mul, rank};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Facet {
    /// Coefficients in lattice coordinates; index 0 multiplies the height.
    pub normal: Vec<i128>,
}

impl Facet {
    pub fn eval(&self, y: &[i128]) -> Result<i128> {
        dot(&self.normal, y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FacetMethod {
    /// Brute force when within its guards, double description otherwise.
    Auto,
    BruteForce,
    DoubleDescription,
}

pub const BRUTE_FORCE_VERTEX_LIMIT: usize = 40;
pub const BRUTE_FORCE_SUBSET_LIMIT: u64 = 2_000_000;

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k.min(n - k) as u128 {
        r = r * (n as u128 - i) / (i + 1);
        if r > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    r as u64
}

pub(crate) fn brute_force_feasible(points: &[Vec<i128>]) -> bool {
    let d = points.first().map_or(0, Vec::len);
    points.len() <= BRUTE_FORCE_VERTEX_LIMIT && binomial(points.len(), d.saturating_sub(1)) <= BRUTE_FORCE_SUBSET_LIMIT
}

/// Every hyperplane through `D-1` points (`D` = lattice rank) spanning a
/// hyperplane; kept when all points lie on one side.
pub(crate) fn brute_force(points: &[Vec<i128>]) -> Result<Vec<Facet>> {
    let d = points.first().map_or(0, Vec::len);
    if points.len() > BRUTE_FORCE_VERTEX_LIMIT {
        return Err(Error::guard("brute-force facet vertex count", BRUTE_FORCE_VERTEX_LIMIT as u64));
    }
    if binomial(points.len(), d.saturating_sub(1)) > BRUTE_FORCE_SUBSET_LIMIT {
        return Err(Error::guard("brute-force facet candidate subsets", BRUTE_FORCE_SUBSET_LIMIT));
    }
    if d <= 1 {
        return Ok(Vec::new());
    }
    let mut found = BTreeSet::new();
    for subset in (0..points.len()).combinations(d - 1) {
        let rows: Vec<Vec<i128>> = subset.iter().map(|&i| points[i].clone()).collect();
        let Some(mut h) = kernel_vector(&rows, d)? else { continue };
        let values = points.iter().map(|p| dot(&h, p)).collect::<Result<Vec<_>>>()?;
        if values.iter().any(|&v| v < 0) {
            if values.iter().any(|&v| v > 0) {
                continue;
            }
            h.iter_mut().for_each(|x| *x = -*x);
        }
        found.insert(h);
    }
    Ok(found.into_iter().map(|normal| Facet { normal }).collect())
}

#[derive(Clone)]
struct Ray {
    h: Vec<i128>,
    /// Processed constraints tight at this ray.
    zeros: Vec<u64>,
}

fn set_bit(set: &mut [u64], i: usize) {
    set[i / 64] |= 1 << (i % 64);
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Extreme rays of `{h : <p, h> >= 0 for all points p}` by the double
/// description method with the combinatorial adjacency test. The points
/// must span the whole space.
pub(crate) fn double_description(points: &[Vec<i128>]) -> Result<Vec<Facet>> {
    let d = points.first().map_or(0, Vec::len);
    if d <= 1 {
        return Ok(Vec::new());
    }
    let n = points.len();
    let words = n.div_ceil(64);
    // Initial simplicial cone from the first D independent points.
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..n {
        let mut rows: Vec<Vec<i128>> = basis.iter().map(|&j| points[j].clone()).collect();
        rows.push(points[i].clone());
        if rank(&rows)? == rows.len() {
            basis.push(i);
            if basis.len() == d {
                break;
            }
        }
    }
    if basis.len() != d {
        return Err(Error::Inconsistency("points do not span the lattice".into()));
    }
    let mut rays = Vec::new();
    for (k, &i) in basis.iter().enumerate() {
        let others: Vec<Vec<i128>> = basis.iter().filter(|&&j| j != i).map(|&j| points[j].clone()).collect();
        let mut h = kernel_vector(&others, d)?.ok_or_else(|| Error::Inconsistency("degenerate initial cone".into()))?;
        if dot(&h, &points[i])? < 0 {
            h.iter_mut().for_each(|x| *x = -*x);
        }
        let mut zeros = vec![0u64; words];
        for (l, &j) in basis.iter().enumerate() {
            if l != k {
                set_bit(&mut zeros, j);
            }
        }
        rays.push(Ray { h, zeros });
    }
    for i in (0..n).filter(|i| !basis.contains(i)) {
        let values = rays.iter().map(|r| dot(&r.h, &points[i])).collect::<Result<Vec<_>>>()?;
        let pos: Vec<usize> = (0..rays.len()).filter(|&r| values[r] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&r| values[r] < 0).collect();
        if neg.is_empty() {
            for (r, &v) in rays.iter_mut().zip(&values) {
                if v == 0 {
                    set_bit(&mut r.zeros, i);
                }
            }
            continue;
        }
        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common: Vec<u64> = rays[p].zeros.iter().zip(&rays[q].zeros).map(|(a, b)| a & b).collect();
                if common.iter().map(|w| w.count_ones() as usize).sum::<usize>() + 2 < d {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|r| r == p || r == q || !subset(&common, &rays[r].zeros));
                if !adjacent {
                    continue;
                }
                let (sp, sq) = (values[p], values[q]);
                let mut h: Vec<i128> = rays[q]
                    .h
                    .iter()
                    .zip(&rays[p].h)
                    .map(|(&a, &b)| mul(sp, a)?.checked_sub(mul(sq, b)?).ok_or(Error::Overflow("double description")))
                    .collect::<Result<_>>()?;
                make_primitive(&mut h);
                let mut zeros = common;
                set_bit(&mut zeros, i);
                fresh.push(Ray { h, zeros });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (r, &v) in rays.into_iter().zip(&values) {
            if v > 0 {
                next.push(r);
            } else if v == 0 {
                let mut r = r;
                set_bit(&mut r.zeros, i);
                next.push(r);
            }
        }
        next.extend(fresh);
        rays = next;
    }
    let mut out: Vec<Facet> = rays.into_iter().map(|r| Facet { normal: r.h }).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Sanity check: every facet is nonnegative on all points and tight on a
/// set of rank `D-1`.
pub(crate) fn verify(points: &[Vec<i128>], facets: &[Facet]) -> Result<bool> {
    let d = points.first().map_or(0, Vec::len);
    for f in facets {
        let mut tight = Vec::new();
        for p in points {
            let v = f.eval(p)?;
            if v < 0 {
                return Ok(false);
            }
            if v == 0 {
                tight.push(p.clone());
            }
        }
        if rank(&tight)? + 1 != d {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Vec<i128>> {
        vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![1, 1, 1]]
    }

    #[test]
    fn square_has_four_facets() {
        let a = brute_force(&square()).unwrap();
        let b = double_description(&square()).unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(a, b);
        assert!(verify(&square(), &a).unwrap());
    }

    #[test]
    fn cube_and_octahedron() {
        let cube: Vec<Vec<i128>> = (0..8).map(|m| vec![1, m & 1, m >> 1 & 1, m >> 2 & 1]).collect();
        let f = double_description(&cube).unwrap();
        assert_eq!(f.len(), 6);
        assert_eq!(f, brute_force(&cube).unwrap());
        let mut octa = Vec::new();
        for i in 0..3 {
            for s in [-1, 1] {
                let mut p = vec![1, 0, 0, 0];
                p[i + 1] = s;
                octa.push(p);
            }
        }
        let f = double_description(&octa).unwrap();
        assert_eq!(f.len(), 8);
        assert_eq!(f, brute_force(&octa).unwrap());
    }

    #[test]
    fn segment() {
        let f = brute_force(&[vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(f, vec![Facet { normal: vec![0, 1] }, Facet { normal: vec![1, -1] }]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(40, 20), 137_846_528_820);
        assert_eq!(binomial(3, 5), 0);
    }
}
