use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{determinant, gram_matrix, LatticeBasis, Delta};
use crate::arith::exact_sqrt;
use crate::{Error, Result};

/// Exact Gram–Schmidt data of a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramSchmidt {
    /// `‖b*_i‖²`.
    pub norms_sq: Vec<BigRational>,
    /// `mu[i][j] = ⟨b_i, b*_j⟩ / ‖b*_j‖²` for `j < i`; zero elsewhere.
    pub mu: Vec<Vec<BigRational>>,
}

pub fn gram_schmidt(basis: &LatticeBasis) -> Result<GramSchmidt> {
    let n = basis.rank();
    let gram = gram_matrix(basis.rows());
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms_sq: Vec<BigRational> = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..i {
            let mut v = BigRational::from_integer(gram[i][j].clone());
            for k in 0..j {
                v -= &mu[j][k] * &mu[i][k] * &norms_sq[k];
            }
            mu[i][j] = v / &norms_sq[j];
        }
        let mut b = BigRational::from_integer(gram[i][i].clone());
        for k in 0..i {
            b -= &mu[i][k] * &mu[i][k] * &norms_sq[k];
        }
        if b.is_zero() {
            return Err(Error::DegenerateBasis { row: i });
        }
        norms_sq.push(b);
    }
    Ok(GramSchmidt { norms_sq, mu })
}

/// Size reduction (`|μ_ij| ≤ 1/2`) and the Lovász condition, checked exactly.
pub fn is_lll_reduced(basis: &LatticeBasis, delta: Delta) -> Result<bool> {
    let gs = gram_schmidt(basis)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let delta = delta.to_rational();
    for i in 1..basis.rank() {
        if gs.mu[i][..i].iter().any(|m| m.abs() > half) {
            return Ok(false);
        }
        let m = &gs.mu[i][i - 1];
        if gs.norms_sq[i] < (&delta - m * m) * &gs.norms_sq[i - 1] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lattice volume as the exact Gram determinant `det(B·Bᵀ)`, with its integer
/// square root when it is a perfect square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Volume {
    pub gram_det: BigInt,
    pub root: Option<BigInt>,
}

pub fn volume(basis: &LatticeBasis) -> Result<Volume> {
    let gram_det = determinant(&gram_matrix(basis.rows()))?;
    if gram_det.is_zero() {
        // Locate the offending row for the error.
        gram_schmidt(basis)?;
        return Err(Error::DegenerateBasis { row: basis.rank() - 1 });
    }
    let root = exact_sqrt(&gram_det);
    Ok(Volume { gram_det, root })
}
