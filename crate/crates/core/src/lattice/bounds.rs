//! Reduction-quality bounds, evaluated in the log₂ domain where the values
//! overflow `f64` (block bounds at λ = 100 are around 2^36000).

use libm::{exp2, log, log2, pow};

use crate::{Error, Result};

const LLL_AVERAGE_BASE: f64 = 1.02;

/// `2^{(n-1)/2}`.
pub fn bound_lll_worstcase(n: u64) -> f64 {
    exp2(bound_lll_worstcase_log2(n))
}

pub fn bound_lll_worstcase_log2(n: u64) -> f64 {
    (n as f64 - 1.0) / 2.0
}

/// Average-case LLL ratio `1.02^n`.
pub fn bound_lll_average(n: u64) -> f64 {
    pow(LLL_AVERAGE_BASE, n as f64)
}

pub fn bound_lll_average_log2(n: u64) -> f64 {
    n as f64 * log2(LLL_AVERAGE_BASE)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockVariant {
    /// `√γ_k · β_k^{(m-1)/2}` with `m = n/k`.
    Schnorr,
    /// `√γ_k · (4/3)^{(3k-1)/4} · β_k^{n/2k - 1}`.
    Ghkn,
}

/// Which stand-in was used for Schnorr's constant `β_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaProxy {
    /// `k^{1.1}`, valid for `k ≤ 100`.
    PowerBound,
    /// `(1 + k/2)^{2 ln 2 + 1/k}`.
    RankinBound,
}

/// Block-reduction bound on `‖b_1‖ / λ_1`, split into log₂ factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockBound {
    pub variant: BlockVariant,
    pub k: u64,
    pub n: u64,
    /// log₂ of `√γ_k`, with `γ_k` replaced by its upper bound `k`.
    pub hermite_log2: f64,
    /// log₂ of `(4/3)^{(3k-1)/4}` (zero for the Schnorr variant).
    pub rankin_log2: f64,
    /// log₂ of the `β_k` power.
    pub beta_log2: f64,
    pub beta_proxy: BetaProxy,
}

impl BlockBound {
    pub fn log2(&self) -> f64 {
        self.hermite_log2 + self.rankin_log2 + self.beta_log2
    }

    /// The bound itself; `inf` once it leaves the `f64` range.
    pub fn value(&self) -> f64 {
        exp2(self.log2())
    }
}

/// Upper bound used for the Hermite constant: `γ_k ≤ k`.
pub fn hermite_proxy(k: u64) -> f64 {
    k as f64
}

/// log₂ of the instantiated `β_k` and the proxy used.
pub fn schnorr_beta(k: u64) -> (f64, BetaProxy) {
    let k = k as f64;
    if k <= 100.0 {
        (1.1 * log2(k), BetaProxy::PowerBound)
    } else {
        ((2.0 * log(2.0) + 1.0 / k) * log2(1.0 + k / 2.0), BetaProxy::RankinBound)
    }
}

pub fn bound_block_reduction(k: u64, n: u64, variant: BlockVariant) -> Result<BlockBound> {
    if k < 2 || k > n {
        return Err(Error::Domain(alloc::format!("block size k = {k} must satisfy 2 <= k <= n = {n}")));
    }
    let (beta_log2, beta_proxy) = schnorr_beta(k);
    let (kf, nf) = (k as f64, n as f64);
    let hermite_log2 = 0.5 * log2(hermite_proxy(k));
    let (rankin_log2, exponent) = match variant {
        BlockVariant::Schnorr => (0.0, (nf / kf - 1.0) / 2.0),
        BlockVariant::Ghkn => ((3.0 * kf - 1.0) / 4.0 * log2(4.0 / 3.0), nf / (2.0 * kf) - 1.0),
    };
    Ok(BlockBound {
        variant,
        k,
        n,
        hermite_log2,
        rankin_log2,
        beta_log2: exponent * beta_log2,
        beta_proxy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lll_bounds() {
        assert_eq!(bound_lll_worstcase(1), 1.0);
        assert_eq!(bound_lll_worstcase(3), 2.0);
        assert!((bound_lll_average(1) - 1.02).abs() < 1e-15);
        assert!((bound_lll_average(29) - 1.775_845_1).abs() < 1e-6);
        assert!((bound_lll_average(100) - 7.244_646_5).abs() < 1e-6);
    }

    #[test]
    fn ghkn_at_lambda_100() {
        let b = bound_block_reduction(100, 1_000_000, BlockVariant::Ghkn).unwrap();
        let ratio = b.beta_log2 / 1e4;
        assert!((ratio - 3.66).abs() / 3.66 < 0.02, "{ratio}");
        assert_eq!(b.beta_proxy, BetaProxy::PowerBound);
    }

    #[test]
    fn k_equals_n() {
        let b = bound_block_reduction(10, 10, BlockVariant::Ghkn).unwrap();
        assert!((b.beta_log2 + 0.5 * 1.1 * log2(10.0)).abs() < 1e-12);
        assert!(b.value().is_finite() && b.value() > 0.0);
    }

    #[test]
    fn monotone_in_n() {
        for variant in [BlockVariant::Schnorr, BlockVariant::Ghkn] {
            let mut last = f64::NEG_INFINITY;
            for n in (20..200).step_by(10) {
                let v = bound_block_reduction(20, n, variant).unwrap().log2();
                assert!(v > last);
                last = v;
            }
        }
    }

    #[test]
    fn domain() {
        assert!(bound_block_reduction(5, 4, BlockVariant::Ghkn).is_err());
        assert!(bound_block_reduction(1, 4, BlockVariant::Schnorr).is_err());
        assert_eq!(schnorr_beta(200).1, BetaProxy::RankinBound);
    }
}
