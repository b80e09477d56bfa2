//! Exact rank computations over the rationals (fraction-free elimination).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Rank of an integer matrix by Bareiss elimination.
pub fn rank_int(mut m: Vec<Vec<BigInt>>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let rows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let pivot = (rank..rows).find(|&r| !m[r][col].is_zero());
        let Some(pr) = pivot else { continue };
        m.swap(rank, pr);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = v / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank of a rational matrix: clear denominators row by row, then Bareiss.
pub fn rank_rational(m: &[Vec<BigRational>]) -> usize {
    let ints = m
        .iter()
        .map(|row| {
            let den = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect()
        })
        .collect();
    rank_int(ints)
}

/// Inverse of a square rational matrix; `None` when singular.
pub fn inverse_rational(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pr = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pr);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let v = &a[col][c] * &f;
                    a[r][c] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Row vector times matrix over the rationals.
pub fn vec_mat_rational(v: &[BigRational], m: &[Vec<BigRational>]) -> Vec<BigRational> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|c| v.iter().zip(m).fold(BigRational::zero(), |acc, (x, row)| acc + x * &row[c])).collect()
}

/// Hermite normal form basis (upper triangular, positive pivots, entries
/// above each pivot reduced) of the lattice spanned by the integer rows.
pub fn hnf_rows(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for col in 0..cols {
        // gcd elimination on column `col` among the remaining rows
        loop {
            let mut nz: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by(|&a, &b| rows[a][col].magnitude().cmp(rows[b][col].magnitude()));
            let piv = nz[0];
            for &r in &nz[1..] {
                let q = rows[r][col].div_floor(&rows[piv][col]);
                for c in col..cols {
                    let v = &rows[piv][c] * &q;
                    rows[r][c] -= v;
                }
            }
        }
        if let Some(r) = (0..rows.len()).find(|&r| !rows[r][col].is_zero()) {
            let mut pivot = rows.swap_remove(r);
            if pivot[col] < BigInt::zero() {
                for x in pivot.iter_mut() {
                    *x = -&*x;
                }
            }
            for prev in out.iter_mut() {
                let q = prev[col].div_floor(&pivot[col]);
                if !q.is_zero() {
                    for c in col..cols {
                        let v = &pivot[c] * &q;
                        prev[c] -= v;
                    }
                }
            }
            out.push(pivot);
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    out
}

/// Characteristic polynomial `det(T I - m)`, constant term first, by the
/// division-free Berkowitz algorithm.
pub fn charpoly_int(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = m.len();
    // coefficient vectors are highest degree first during the recursion
    let mut poly: Vec<BigInt> = vec![BigInt::one()];
    for k in 0..n {
        // leading k x k block a, column c = m[0..k][k], row r = m[k][0..k], scalar s = m[k][k]
        let s = &m[k][k];
        let mut toeplitz_col: Vec<BigInt> = Vec::with_capacity(k + 2);
        toeplitz_col.push(BigInt::one());
        toeplitz_col.push(-s.clone());
        let mut v: Vec<BigInt> = (0..k).map(|i| m[i][k].clone()).collect();
        for _ in 0..k {
            let t: BigInt = (0..k).map(|j| &m[k][j] * &v[j]).sum();
            toeplitz_col.push(-t);
            v = (0..k).map(|i| (0..k).map(|j| &m[i][j] * &v[j]).sum()).collect();
        }
        let mut next = vec![BigInt::zero(); k + 2];
        for i in 0..k + 2 {
            for j in 0..=i.min(k) {
                if i - j < toeplitz_col.len() {
                    next[i] += &toeplitz_col[i - j] * &poly[j];
                }
            }
        }
        poly = next;
    }
    poly.reverse();
    poly
}

/// Dense linear algebra over F_p on u64 entries.
pub mod fp {
    use crate::intpoly::modp::{invmod, mulmod, submod};

    /// Row-reduce in place; returns pivot columns.
    pub fn rref(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !m[i][c].is_multiple_of(p)) else { continue };
            m.swap(r, pr);
            let inv = invmod(m[r][c], p);
            for x in m[r].iter_mut() {
                *x = mulmod(*x, inv, p);
            }
            for i in 0..rows {
                if i != r && m[i][c] != 0 {
                    let f = m[i][c];
                    for k in 0..cols {
                        let v = mulmod(m[r][k], f, p);
                        m[i][k] = submod(m[i][k], v, p);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(m: &[Vec<u64>], p: u64) -> usize {
        let mut a = m.to_vec();
        rref(&mut a, p).len()
    }

    /// Basis of `{x : m x = 0}`.
    pub fn nullspace(m: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
        let mut a = m.to_vec();
        let pivots = rref(&mut a, p);
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![0u64; cols];
                x[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = submod(0, a[r][f], p);
                }
                x
            })
            .collect()
    }

    /// Echelon basis of the span of the given vectors.
    pub fn span(vectors: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
        let mut a = vectors.to_vec();
        let k = rref(&mut a, p).len();
        a.truncate(k);
        a
    }

    pub fn transpose(m: &[Vec<u64>], cols: usize) -> Vec<Vec<u64>> {
        (0..cols).map(|c| m.iter().map(|r| r[c]).collect()).collect()
    }

    /// Intersection of two subspaces given by spanning vectors of length `n`.
    pub fn intersect(a: &[Vec<u64>], b: &[Vec<u64>], n: usize, p: u64) -> Vec<Vec<u64>> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        // columns: a_1..a_s, -b_1..-b_t; kernel gives combinations
        let mut cols: Vec<Vec<u64>> = a.to_vec();
        cols.extend(b.iter().map(|v| v.iter().map(|&x| submod(0, x, p)).collect()));
        let m = transpose(&cols, n);
        let ker = nullspace(&m, cols.len(), p);
        let out: Vec<Vec<u64>> = ker
            .iter()
            .map(|x| {
                let mut v = vec![0u64; n];
                for (i, ai) in a.iter().enumerate() {
                    for k in 0..n {
                        v[k] = (v[k] + mulmod(x[i], ai[k], p)) % p;
                    }
                }
                v
            })
            .collect();
        span(&out, p)
    }

    /// Matrix product over F_p.
    pub fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
        let n = b.first().map_or(0, |r| r.len());
        a.iter()
            .map(|row| {
                (0..n).map(|c| row.iter().zip(b).fold(0u64, |acc, (x, brow)| (acc + mulmod(*x, brow[c], p)) % p)).collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank_int(mat(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank_int(mat(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 2]])), 2);
        assert_eq!(rank_int(mat(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank_int(mat(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 5], &[1, 1, 1]])), 3);
        let half = BigRational::new(1.into(), 2.into());
        let r = vec![vec![half.clone(), BigRational::one()], vec![BigRational::one(), BigRational::from_integer(2.into())]];
        assert_eq!(rank_rational(&r), 1);
    }

    #[test]
    fn hnf_and_charpoly() {
        let h = hnf_rows(mat(&[&[2, 4], &[3, 1], &[0, 5]]));
        assert_eq!(h, mat(&[&[1, 2], &[0, 5]]));
        let h = hnf_rows(mat(&[&[4, 2], &[0, 6]]));
        assert_eq!(h, mat(&[&[4, 2], &[0, 6]]));
        // companion matrix of T^2 - 3T + 5
        let c = charpoly_int(&mat(&[&[0, -5], &[1, 3]]));
        assert_eq!(c, vec![BigInt::from(5), BigInt::from(-3), BigInt::from(1)]);
        let c = charpoly_int(&mat(&[&[2, 1, 0], &[0, 2, 0], &[1, 1, 3]]));
        // (T-2)^2 (T-3) = T^3 - 7T^2 + 16T - 12
        assert_eq!(c, vec![BigInt::from(-12), BigInt::from(16), BigInt::from(-7), BigInt::from(1)]);
    }

    #[test]
    fn mod_p_spaces() {
        let m = vec![vec![1u64, 1, 0], vec![0, 0, 1]];
        let k = fp::nullspace(&m, 3, 5);
        assert_eq!(k, vec![vec![4, 1, 0]]);
        let a = vec![vec![1u64, 0, 0], vec![0, 1, 0]];
        let b = vec![vec![0u64, 1, 0], vec![0, 0, 1]];
        assert_eq!(fp::intersect(&a, &b, 3, 7), vec![vec![0, 1, 0]]);
        let half = BigRational::new(1.into(), 2.into());
        let inv = inverse_rational(&[vec![BigRational::from_integer(2.into()), BigRational::zero()], vec![BigRational::zero(), half]]).unwrap();
        assert_eq!(inv[1][1], BigRational::from_integer(2.into()));
    }
}
