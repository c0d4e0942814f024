use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{gram_schmidt, GramSchmidt, LatticeBasis};
use crate::arith::norm_sq;
use crate::{Error, Result};

const MAX_RANK: usize = 8;
const MAX_BOX: u128 = 100_000_000;

/// Shortest nonzero lattice vector among the combinations with every
/// coefficient in `[-coeff_bound, coeff_bound]`.
///
/// Depth-first over the coefficients from the last row to the first, pruned
/// exactly with the Gram–Schmidt partial norms. Ties keep the first vector
/// found.
pub fn enumerate_shortest(basis: &LatticeBasis, coeff_bound: u64) -> Result<Vec<BigInt>> {
    let n = basis.rank();
    let box_size = (coeff_bound as u128).checked_pow(n as u32);
    if n > MAX_RANK || coeff_bound == 0 || box_size.is_none_or(|s| s > MAX_BOX) {
        return Err(Error::Intractable(format!(
            "enumeration needs rank <= {MAX_RANK}, bound >= 1 and bound^rank <= 10^8 (rank {n}, bound {coeff_bound})"
        )));
    }
    let gs = gram_schmidt(basis)?;

    let (mut best_idx, mut best) = (0, norm_sq(basis.row(0)));
    for i in 1..n {
        let v = norm_sq(basis.row(i));
        if v < best {
            best = v;
            best_idx = i;
        }
    }
    let mut best_coeffs = vec![0i64; n];
    best_coeffs[best_idx] = 1;

    let mut search = Search {
        gs: &gs,
        bound: coeff_bound as i64,
        coeffs: vec![0i64; n],
        best: BigRational::from_integer(best),
        best_coeffs,
    };
    search.descend(n, &BigRational::zero());

    let coeffs: Vec<BigInt> = search.best_coeffs.iter().map(|&c| BigInt::from(c)).collect();
    Ok(basis.combine(&coeffs))
}

/// Bound on the coefficients of every lattice vector no longer than the
/// shortest basis row.
///
/// With `G` the Gram matrix, `c_i = ⟨v, d_i⟩` for the dual basis `d_i`, whose
/// squared norms are `(G⁻¹)_ii`; so `c_i² ≤ ‖b_min‖²·(G⁻¹)_ii`. The bound is
/// small for reduced bases.
pub fn certified_coefficient_bound(basis: &LatticeBasis) -> Result<u64> {
    let n = basis.rank();
    let gram = super::gram_matrix(basis.rows());
    let shortest = (0..n).map(|i| gram[i][i].clone()).min().unwrap_or_default();
    let mut bound = BigInt::zero();
    for i in 0..n {
        let mut unit = vec![BigInt::zero(); n];
        unit[i] = BigInt::from(1);
        let column = super::solve_rational(&gram, &unit).ok_or(Error::DegenerateBasis { row: n.saturating_sub(1) })?;
        let limit = (&column[i] * BigRational::from_integer(shortest.clone())).floor().to_integer();
        bound = bound.max(limit.sqrt());
    }
    u64::try_from(&bound)
        .map(|b| b.max(1))
        .map_err(|_| Error::Intractable(format!("coefficient bound {bound} does not fit in u64")))
}

/// Exact shortest nonzero vector, enumerating within
/// [`certified_coefficient_bound`]. Reduce the basis first to keep the search
/// box small.
pub fn shortest_vector(basis: &LatticeBasis) -> Result<Vec<BigInt>> {
    enumerate_shortest(basis, certified_coefficient_bound(basis)?)
}

struct Search<'a> {
    gs: &'a GramSchmidt,
    bound: i64,
    coeffs: Vec<i64>,
    best: BigRational,
    best_coeffs: Vec<i64>,
}

impl Search<'_> {
    /// Coefficients `level..n` are fixed; `partial` is their squared
    /// contribution to the norm.
    fn descend(&mut self, level: usize, partial: &BigRational) {
        if level == 0 {
            if self.coeffs.iter().any(|&c| c != 0) && *partial < self.best {
                self.best = partial.clone();
                self.best_coeffs = self.coeffs.clone();
            }
            return;
        }
        let k = level - 1;
        // Projection of the fixed part onto b*_k is (x_k - center)·b*_k.
        let mut center = BigRational::zero();
        for j in level..self.coeffs.len() {
            center -= &self.gs.mu[j][k] * BigRational::from_integer(self.coeffs[j].into());
        }
        let start = center.round().to_integer();
        let start = start.clamp(BigInt::from(-self.bound), BigInt::from(self.bound));
        let start: i64 = i64::try_from(&start).expect("clamped to the coefficient bound");

        // The contribution is convex in x_k; walk outward until it exceeds the budget.
        for dir in [1i64, -1] {
            let mut x = if dir == 1 { start } else { start - 1 };
            while x.abs() <= self.bound {
                let offset = BigRational::from_integer(x.into()) - &center;
                let contrib = &offset * &offset * &self.gs.norms_sq[k];
                let total = partial + contrib;
                if total >= self.best && (&offset * BigRational::from_integer(dir.into())).is_positive() {
                    break;
                }
                if total < self.best {
                    self.coeffs[k] = x;
                    self.descend(k, &total);
                }
                x += dir;
            }
        }
        self.coeffs[k] = 0;
    }
}
