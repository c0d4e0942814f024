//! Integer lattices given by row bases, and their reduction.
//!
//! Bases are stored as rows; transforms multiply on the left, so a reduction
//! outcome always satisfies `transform · original = reduced`.

mod bounds;
mod enumerate;
mod gso;
mod lll;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub use bounds::{
    bound_block_reduction, bound_lll_average, bound_lll_average_log2, bound_lll_worstcase,
    bound_lll_worstcase_log2, hermite_proxy, schnorr_beta, BetaProxy, BlockBound, BlockVariant,
};
pub use enumerate::{certified_coefficient_bound, enumerate_shortest, shortest_vector};
pub use gso::{gram_schmidt, is_lll_reduced, volume, GramSchmidt, Volume};
pub use lll::{lll_reduce, Delta, ReductionOutcome};

/// Dense integer matrix, row-major.
pub type IntMatrix = Vec<Vec<BigInt>>;

/// `n` row vectors of length `m` (`1 ≤ n ≤ m`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    rows: IntMatrix,
    ncols: usize,
}

impl LatticeBasis {
    /// Checks the shape only. Linear independence is verified by the
    /// operations that depend on it and reported as [`Error::DegenerateBasis`].
    pub fn new(rows: IntMatrix) -> Result<Self> {
        let ncols = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || ncols == 0 {
            return Err(Error::Dimension("basis must have at least one nonempty row".into()));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != ncols) {
            return Err(Error::Dimension(format!(
                "row {i} has {} entries, expected {ncols}",
                rows[i].len()
            )));
        }
        if rows.len() > ncols {
            return Err(Error::Dimension(format!(
                "{} rows cannot be independent in dimension {ncols}",
                rows.len()
            )));
        }
        Ok(Self { rows, ncols })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: identity(n),
            ncols: n,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i]
    }

    pub fn into_rows(self) -> IntMatrix {
        self.rows
    }

    /// Integer combination `Σ coeffs_i · row_i`.
    pub fn combine(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        debug_assert_eq!(coeffs.len(), self.rank());
        let mut out = vec![BigInt::zero(); self.ncols];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                *o += c * x;
            }
        }
        out
    }

    /// Integer coefficients expressing `v` in this basis, if `v` is a lattice
    /// vector.
    pub fn coefficients_of(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if v.len() != self.ncols {
            return Err(Error::Dimension(format!(
                "vector has {} entries, basis has {} columns",
                v.len(),
                self.ncols
            )));
        }
        // x·B = v  =>  x·(B·Bᵀ) = v·Bᵀ; B·Bᵀ is invertible for independent rows.
        let n = self.rank();
        let gram = gram_matrix(&self.rows);
        let rhs: Vec<BigInt> = self.rows.iter().map(|r| crate::arith::dot(r, v)).collect();
        let sol = solve_rational(&gram, &rhs).ok_or_else(|| {
            let row = gram_schmidt(self).err().map_or(n - 1, |e| match e {
                Error::DegenerateBasis { row } => row,
                _ => n - 1,
            });
            Error::DegenerateBasis { row }
        })?;
        if sol.iter().any(|x| !x.is_integer()) {
            return Ok(None);
        }
        let coeffs: Vec<BigInt> = sol.into_iter().map(|x| x.to_integer()).collect();
        Ok((self.combine(&coeffs) == v).then_some(coeffs))
    }
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// `a · b` for conforming dense matrices.
pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Result<IntMatrix> {
    let inner = b.len();
    if a.iter().any(|r| r.len() != inner) {
        return Err(Error::Dimension("inner dimensions differ".into()));
    }
    let cols = b.first().map(Vec::len).unwrap_or(0);
    Ok(a.iter()
        .map(|ra| {
            (0..cols)
                .map(|j| {
                    ra.iter()
                        .zip(b)
                        .filter(|(x, _)| !x.is_zero())
                        .map(|(x, rb)| x * &rb[j])
                        .sum()
                })
                .collect()
        })
        .collect())
}

/// `B · Bᵀ`.
pub fn gram_matrix(rows: &[Vec<BigInt>]) -> IntMatrix {
    let n = rows.len();
    let mut g = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let v = crate::arith::dot(&rows[i], &rows[j]);
            g[j][i] = v.clone();
            g[i][j] = v;
        }
    }
    g
}

/// Exact determinant of a square integer matrix (fraction-free Bareiss
/// elimination).
pub fn determinant(m: &[Vec<BigInt>]) -> Result<BigInt> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a: IntMatrix = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// Solves `x · a = rhs` for symmetric invertible `a` over the rationals.
fn solve_rational(a: &[Vec<BigInt>], rhs: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = a.len();
    // a is symmetric, so x·a = rhs is the same as a·xᵀ = rhsᵀ.
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            row.iter()
                .chain(core::iter::once(r))
                .map(|v| BigRational::from_integer(v.clone()))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = m[col].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// `true` if `v` has absolute value at most `bound` in every coordinate.
pub(crate) fn within_inf(v: &[BigInt], bound: &BigInt) -> bool {
    v.iter().all(|x| x.abs() <= *bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_checks() {
        assert!(LatticeBasis::new(vec![]).is_err());
        assert!(LatticeBasis::from_i64(&[&[1, 2], &[3]]).is_err());
        assert!(LatticeBasis::from_i64(&[&[1], &[2]]).is_err());
        let b = LatticeBasis::from_i64(&[&[1, 2, 3]]).unwrap();
        assert_eq!((b.rank(), b.ambient_dim()), (1, 3));
    }

    #[test]
    fn determinant_small() {
        let m = LatticeBasis::from_i64(&[&[0, 2, 1], &[3, 1, 4], &[1, 5, 9]])
            .unwrap()
            .into_rows();
        // 0(9-20) - 2(27-4) + 1(15-1) = -46 + 14
        assert_eq!(determinant(&m).unwrap(), BigInt::from(-32));
        assert_eq!(determinant(&identity(4)).unwrap(), BigInt::one());
    }

    #[test]
    fn coefficients_roundtrip() {
        let b = LatticeBasis::from_i64(&[&[2, 0, 1], &[1, 3, 0]]).unwrap();
        let v = b.combine(&[BigInt::from(-3), BigInt::from(5)]);
        assert_eq!(
            b.coefficients_of(&v).unwrap(),
            Some(vec![BigInt::from(-3), BigInt::from(5)])
        );
        let outside = [BigInt::from(1), BigInt::from(0), BigInt::from(0)];
        assert_eq!(b.coefficients_of(&outside).unwrap(), None);
    }
}
