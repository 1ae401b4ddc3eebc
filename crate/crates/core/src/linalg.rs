//! Exact integer linear algebra on dense `BigInt` matrices.
//!
//! Rows are relators, columns basis keys. Nothing here needs to be fast:
//! the matrices in scope have a few hundred rows at most, but coefficient
//! growth during elimination is real, so every entry is arbitrary precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

/// Rank over Q by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(matrix: &Matrix, ncols: usize) -> usize {
    let mut a: Matrix = matrix.clone();
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Nonzero diagonal entries of the Smith normal form, each dividing the next.
pub fn smith_invariants(matrix: &Matrix, ncols: usize) -> Vec<BigInt> {
    let mut a: Matrix = matrix.iter().filter(|row| row.iter().any(|x| !x.is_zero())).cloned().collect();
    let nrows = a.len();
    let mut out = Vec::new();
    let mut k = 0;
    while k < nrows.min(ncols) {
        // smallest nonzero |entry| in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..nrows {
            for j in k..ncols {
                if !a[i][j].is_zero() && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        let mut clean = true;
        for i in k + 1..nrows {
            if a[i][k].is_zero() {
                continue;
            }
            let q = a[i][k].div_floor(&a[k][k]);
            let (head, tail) = a.split_at_mut(i);
            for (x, p) in tail[0][k..].iter_mut().zip(&head[k][k..]) {
                *x -= &q * p;
            }
            if !a[i][k].is_zero() {
                clean = false;
            }
        }
        for j in k + 1..ncols {
            if a[k][j].is_zero() {
                continue;
            }
            let q = a[k][j].div_floor(&a[k][k]);
            for row in a[k..].iter_mut() {
                let v = &q * &row[k];
                row[j] -= v;
            }
            if !a[k][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // the pivot must divide the whole trailing block
        let bad = (k + 1..nrows).find(|&i| (k + 1..ncols).any(|j| !a[i][j].is_multiple_of(&a[k][k])));
        if let Some(i) = bad {
            let src = a[i].clone();
            for (dst, s) in a[k].iter_mut().zip(src) {
                *dst += s;
            }
            continue;
        }
        out.push(a[k][k].abs());
        k += 1;
    }
    out
}

/// Row Hermite normal form: pivots strictly increase, are positive, and the
/// entries above each pivot lie in `[0, pivot)`. Returns `(pivot column, row)`.
pub fn hermite_rows(matrix: &Matrix, ncols: usize) -> Vec<(usize, Vec<BigInt>)> {
    let mut a: Matrix = matrix.iter().filter(|row| row.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut out: Vec<(usize, Vec<BigInt>)> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        loop {
            let mut nz: Vec<usize> = (r..a.len()).filter(|&i| !a[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by(|&x, &y| a[x][c].abs().cmp(&a[y][c].abs()));
            let p = nz[0];
            for &i in &nz[1..] {
                let q = a[i][c].div_floor(&a[p][c]);
                let prow = a[p].clone();
                for (x, y) in a[i].iter_mut().zip(prow.iter()) {
                    *x -= &q * y;
                }
            }
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        let prow = a[r].clone();
        for (_, row) in out.iter_mut() {
            let q = row[c].div_floor(&prow[c]);
            if !q.is_zero() {
                for (x, y) in row.iter_mut().zip(prow.iter()) {
                    *x -= &q * y;
                }
            }
        }
        out.push((c, prow));
        r += 1;
    }
    out
}

/// Canonical coset representative of `v` modulo the row lattice of `hnf`.
pub fn reduce_by_hermite(v: &[BigInt], hnf: &[(usize, Vec<BigInt>)]) -> Vec<BigInt> {
    let mut v = v.to_vec();
    for (c, row) in hnf {
        let q = v[*c].div_floor(&row[*c]);
        if !q.is_zero() {
            for (x, y) in v.iter_mut().zip(row.iter()) {
                *x -= &q * y;
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn rank_small() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(bareiss_rank(&a, 3), 2);
        assert_eq!(bareiss_rank(&m(&[]), 3), 0);
    }

    #[test]
    fn smith_small() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        assert_eq!(smith_invariants(&a, 3), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let b = m(&[&[2, 0], &[0, 3]]);
        assert_eq!(smith_invariants(&b, 2), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn hermite_reduction_is_canonical() {
        let a = m(&[&[2, 1, 0], &[0, 3, 1]]);
        let h = hermite_rows(&a, 3);
        let v = m(&[&[5, 7, 2]])[0].clone();
        let w: Vec<BigInt> = v.iter().zip(&a[0]).zip(&a[1]).map(|((x, p), q)| x + p * 3 - q * 2).collect();
        assert_eq!(reduce_by_hermite(&v, &h), reduce_by_hermite(&w, &h));
        let zero = reduce_by_hermite(&a[1], &h);
        assert!(zero.iter().all(|x| x.is_zero()));
    }
}
