//! Exact integral LLL reduction.
//!
//! All Gram–Schmidt data is kept as integers: `d[i]` is the Gram determinant
//! of the first `i` rows and `lam[k][j] = d[j+1] · μ_{k,j}`, so no rational
//! arithmetic is needed and every division below is exact.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{identity, IntMatrix, LatticeBasis};
use crate::arith::{dot, round_div};
use crate::{Error, Result};

/// Lovász parameter `num/den ∈ (1/4, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Delta {
    num: u64,
    den: u64,
}

impl Delta {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        // 1/4 < num/den < 1
        if den == 0 || 4 * num <= den || num >= den {
            return Err(Error::Domain(format!("delta {num}/{den} outside (1/4, 1)")));
        }
        Ok(Self { num, den })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(self.num.into(), self.den.into())
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Default for Delta {
    fn default() -> Self {
        Self { num: 3, den: 4 }
    }
}

impl core::fmt::Display for Delta {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutcome {
    pub reduced: LatticeBasis,
    /// Unimodular `U` with `U · original = reduced`.
    pub transform: IntMatrix,
    pub swaps: u64,
    pub size_reductions: u64,
    pub delta: Delta,
}

struct State {
    b: IntMatrix,
    u: IntMatrix,
    /// `d[0] = 1`, `d[i+1]` = Gram determinant of rows `0..=i`.
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
    swaps: u64,
    size_reductions: u64,
}

impl State {
    /// Fills row `k` of `lam` and `d[k+1]` from scratch.
    fn orthogonalize(&mut self, k: usize) -> Result<()> {
        for j in 0..=k {
            let mut u = dot(&self.b[k], &self.b[j]);
            for i in 0..j {
                u = (&self.d[i + 1] * &u - &self.lam[k][i] * &self.lam[j][i]) / &self.d[i];
            }
            if j < k {
                self.lam[k][j] = u;
            } else {
                if u.is_zero() {
                    return Err(Error::DegenerateBasis { row: k });
                }
                self.d[k + 1] = u;
            }
        }
        Ok(())
    }

    /// Size-reduces row `k` against row `l < k`.
    fn reduce(&mut self, k: usize, l: usize) {
        let dl = &self.d[l + 1];
        if (self.lam[k][l].abs() << 1u32) <= *dl {
            return;
        }
        let q = round_div(&self.lam[k][l], dl);
        let (head, tail) = self.b.split_at_mut(k);
        for (x, y) in tail[0].iter_mut().zip(&head[l]) {
            *x -= &q * y;
        }
        let (head, tail) = self.u.split_at_mut(k);
        for (x, y) in tail[0].iter_mut().zip(&head[l]) {
            if !y.is_zero() {
                *x -= &q * y;
            }
        }
        self.lam[k][l] -= &q * &self.d[l + 1];
        for i in 0..l {
            let t = &q * &self.lam[l][i];
            self.lam[k][i] -= t;
        }
        self.size_reductions += 1;
    }

    /// Exchanges rows `k-1` and `k` and updates the integral GSO data.
    fn swap(&mut self, k: usize, kmax: usize) {
        self.b.swap(k, k - 1);
        self.u.swap(k, k - 1);
        for j in 0..k - 1 {
            let (a, b) = self.lam.split_at_mut(k);
            core::mem::swap(&mut a[k - 1][j], &mut b[0][j]);
        }
        let lam = self.lam[k][k - 1].clone();
        // d indices shifted by one: d_{k-1} -> d[k], d_k -> d[k+1], d_{k-2} -> d[k-1].
        let new_d = (&self.d[k - 1] * &self.d[k + 1] + &lam * &lam) / &self.d[k];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&self.d[k + 1] * &self.lam[i][k - 1] - &lam * &t) / &self.d[k];
            self.lam[i][k - 1] = (&new_d * &t + &lam * &self.lam[i][k]) / &self.d[k + 1];
        }
        self.d[k] = new_d;
        self.swaps += 1;
    }
}

/// LLL-reduces `basis` with Lovász parameter `delta`, tracking the transform.
///
/// Size reduction rounds `μ` half away from zero and only fires when
/// `|μ| > 1/2`, so an already reduced basis is returned unchanged.
pub fn lll_reduce(basis: &LatticeBasis, delta: Delta) -> Result<ReductionOutcome> {
    let n = basis.rank();
    let mut st = State {
        b: basis.rows().to_vec(),
        u: identity(n),
        d: vec![BigInt::zero(); n + 1],
        lam: vec![vec![BigInt::zero(); n]; n],
        swaps: 0,
        size_reductions: 0,
    };
    st.d[0] = BigInt::from(1);
    st.orthogonalize(0)?;
    let (dn, dd) = (BigInt::from(delta.num), BigInt::from(delta.den));
    let mut k = 1;
    let mut kmax = 0;
    while k < n {
        if k > kmax {
            kmax = k;
            st.orthogonalize(k)?;
        }
        st.reduce(k, k - 1);
        // Swap unless d_k·d_{k-2} + λ² ≥ δ·d_{k-1}².
        let lam = &st.lam[k][k - 1];
        let lhs = (&st.d[k + 1] * &st.d[k - 1] + lam * lam) * &dd;
        let rhs = &st.d[k] * &st.d[k] * &dn;
        if lhs < rhs {
            st.swap(k, kmax);
            k = k.saturating_sub(1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                st.reduce(k, l);
            }
            k += 1;
        }
    }
    Ok(ReductionOutcome {
        reduced: LatticeBasis::new(st.b)?,
        transform: st.u,
        swaps: st.swaps,
        size_reductions: st.size_reductions,
        delta,
    })
}
