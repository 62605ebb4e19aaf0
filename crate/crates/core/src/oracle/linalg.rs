//! Exact integer linear algebra over checked `i128`.

use crate::{Error, Result};

pub(crate) fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow("multiplication"))
}

pub(crate) fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow("addition"))
}

pub(crate) fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Divides `v` by the gcd of its entries; returns that gcd (0 for zero).
pub(crate) fn make_primitive(v: &mut [i128]) -> i128 {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
    g
}

pub(crate) fn dot(a: &[i128], b: &[i128]) -> Result<i128> {
    a.iter().zip(b).try_fold(0i128, |s, (&x, &y)| add(s, mul(x, y)?))
}

/// `row_i -= q * row_j`.
fn sub_row(rows: &mut [Vec<i128>], i: usize, j: usize, q: i128) -> Result<()> {
    if q == 0 {
        return Ok(());
    }
    for c in 0..rows[i].len() {
        let t = mul(q, rows[j][c])?;
        rows[i][c] = rows[i][c].checked_sub(t).ok_or(Error::Overflow("row reduction"))?;
    }
    Ok(())
}

/// Hermite normal form of the row lattice: unimodular row operations only,
/// so the lattice spanned by the rows is preserved. Zero rows are dropped,
/// pivots are positive and entries above a pivot are reduced into
/// `[0, pivot)`. Returns the rows and their pivot columns.
pub(crate) fn hermite(mut rows: Vec<Vec<i128>>) -> Result<(Vec<Vec<i128>>, Vec<usize>)> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        loop {
            // Smallest nonzero entry in column c at or below row r.
            let Some(best) = (r..rows.len()).filter(|&i| rows[i][c] != 0).min_by_key(|&i| rows[i][c].abs()) else {
                break;
            };
            rows.swap(r, best);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c] != 0 {
                    let q = rows[i][c] / rows[r][c];
                    sub_row(&mut rows, i, r, q)?;
                    done &= rows[i][c] == 0;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][c] == 0 {
            continue;
        }
        if rows[r][c] < 0 {
            for x in rows[r].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..r {
            let q = rows[i][c].div_euclid(rows[r][c]);
            sub_row(&mut rows, i, r, q)?;
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Ok((rows, pivots))
}

/// Primitive generator of the kernel of `rows` (as a map on column vectors)
/// when that kernel is one-dimensional; `None` otherwise. The sign is
/// unspecified.
pub(crate) fn kernel_vector(rows: &[Vec<i128>], cols: usize) -> Result<Option<Vec<i128>>> {
    let (ech, pivots) = if rows.is_empty() { (Vec::new(), Vec::new()) } else { hermite(rows.to_vec())? };
    if pivots.len() + 1 != cols {
        return Ok(None);
    }
    let free = (0..cols).find(|c| !pivots.contains(c)).unwrap();
    let mut x = vec![0i128; cols];
    x[free] = 1;
    for (row, &p) in ech.iter().zip(&pivots).rev() {
        let mut s = 0i128;
        for j in p + 1..cols {
            s = add(s, mul(row[j], x[j])?)?;
        }
        let a = row[p];
        if s % a != 0 {
            let scale = a / gcd(s, a);
            for v in x.iter_mut() {
                *v = mul(*v, scale.abs())?;
            }
            s = mul(s, scale.abs())?;
        }
        x[p] = -s / a;
    }
    make_primitive(&mut x);
    Ok(Some(x))
}

/// Unique rational solution of `A y = b`, as `(numerators, denominator)`
/// with positive denominator; `None` when the system is inconsistent or
/// underdetermined.
pub(crate) fn solve_unique(a: &[Vec<i128>], b: &[i128]) -> Result<Option<(Vec<i128>, i128)>> {
    let cols = a.first().map_or(0, Vec::len);
    let aug: Vec<Vec<i128>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(-bi);
            r
        })
        .collect();
    let Some(mut k) = kernel_vector(&aug, cols + 1)? else { return Ok(None) };
    let mut t = k.pop().unwrap();
    if t == 0 {
        return Ok(None);
    }
    if t < 0 {
        t = -t;
        for x in k.iter_mut() {
            *x = -*x;
        }
    }
    Ok(Some((k, t)))
}

/// Rank of an integer matrix.
pub(crate) fn rank(rows: &[Vec<i128>]) -> Result<usize> {
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(hermite(rows.to_vec())?.1.len())
}

/// Coordinates of `x` in the echelon basis `(rows, pivots)`; `None` when `x`
/// is not in the row lattice.
pub(crate) fn lattice_coordinates(rows: &[Vec<i128>], pivots: &[usize], x: &[i128]) -> Result<Option<Vec<i128>>> {
    let mut rest = x.to_vec();
    let mut y = Vec::with_capacity(rows.len());
    for (row, &p) in rows.iter().zip(pivots) {
        if rest[p] % row[p] != 0 {
            return Ok(None);
        }
        let q = rest[p] / row[p];
        for (r, &b) in rest.iter_mut().zip(row) {
            *r = r.checked_sub(mul(q, b)?).ok_or(Error::Overflow("coordinates"))?;
        }
        y.push(q);
    }
    Ok(rest.iter().all(|&r| r == 0).then_some(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hermite_small() {
        let (h, p) = hermite(vec![vec![2, 4], vec![3, 5]]).unwrap();
        assert_eq!(p, vec![0, 1]);
        assert_eq!(h, vec![vec![1, 1], vec![0, 2]]);
        let (h, p) = hermite(vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, -1]]).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(h.len(), 2);
    }

    #[test]
    fn kernel_and_solve() {
        let k = kernel_vector(&[vec![1, 1, 1], vec![0, 2, 1]], 3).unwrap().unwrap();
        assert_eq!(dot(&k, &[1, 1, 1]).unwrap(), 0);
        assert_eq!(dot(&k, &[0, 2, 1]).unwrap(), 0);
        assert_eq!(kernel_vector(&[vec![1, 1, 1]], 3).unwrap(), None);
        let (y, t) = solve_unique(&[vec![2, 0], vec![0, 3]], &[1, 1]).unwrap().unwrap();
        assert_eq!((y, t), (vec![3, 2], 6));
        assert_eq!(solve_unique(&[vec![1, 1], vec![2, 2]], &[1, 3]).unwrap(), None);
    }

    #[test]
    fn coordinates_round_trip() {
        let (h, p) = hermite(vec![vec![1, 1, 0], vec![1, 0, 1]]).unwrap();
        let y = lattice_coordinates(&h, &p, &[3, 1, 2]).unwrap().unwrap();
        let back: Vec<i128> = (0..3).map(|c| y.iter().zip(&h).map(|(a, r)| a * r[c]).sum()).collect();
        assert_eq!(back, vec![3, 1, 2]);
        assert_eq!(lattice_coordinates(&h, &p, &[1, 1, 1]).unwrap(), None);
    }

    proptest! {
        #[test]
        fn hermite_preserves_lattice(rows in proptest::collection::vec(proptest::collection::vec(-4i128..5, 3), 1..5)) {
            let (h, p) = hermite(rows.clone()).unwrap();
            prop_assert_eq!(h.len(), p.len());
            for r in &rows {
                prop_assert!(lattice_coordinates(&h, &p, r).unwrap().is_some());
            }
            prop_assert_eq!(rank(&rows).unwrap(), h.len());
        }

        #[test]
        fn kernel_is_orthogonal(rows in proptest::collection::vec(proptest::collection::vec(-3i128..4, 4), 3)) {
            if let Some(k) = kernel_vector(&rows, 4).unwrap() {
                for r in &rows {
                    prop_assert_eq!(dot(r, &k).unwrap(), 0);
                }
                prop_assert!(k.iter().any(|&x| x != 0));
            }
        }
    }
}
