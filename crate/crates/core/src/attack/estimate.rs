//! Feasibility arithmetic for the attack at a given parameter set.

use libm::log2;

use crate::lattice::{bound_block_reduction, bound_lll_average_log2, BlockBound, BlockVariant};
use crate::{Params, Result};

/// Counting argument for a small solution of `|Σ y_i x_i + y·c| ≤ 2^{λ²}`
/// with `|y|, |y_i| ≤ 2^{λ²}`: there are `2^{λ²(t+2)}` coefficient vectors
/// against `2^γ`-sized integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PigeonholeBound {
    /// log₂ of the guaranteed coefficient bound, `λ²`.
    pub coeff_log2: u64,
    /// log₂ of the number of coefficient vectors, `λ²·(t+2)`.
    pub count_log2: u64,
    pub gamma: u64,
    /// `count_log2 > γ`, and the instance is not degenerate (`γ > λ²`).
    pub holds: bool,
}

pub fn pigeonhole_log_bound(lambda: u32, subset_size: u64, gamma: u64) -> PigeonholeBound {
    let coeff_log2 = (lambda as u64).pow(2);
    let count_log2 = coeff_log2 * (subset_size + 2);
    PigeonholeBound {
        coeff_log2,
        count_log2,
        gamma,
        holds: gamma > coeff_log2 && count_log2 > gamma,
    }
}

/// One way of predicting the norm of the vector the reduction returns.
#[derive(Debug, Clone, PartialEq)]
pub struct Predictor {
    pub name: &'static str,
    /// log₂ of the predicted approximation factor `‖b‖ / λ_1`.
    pub factor_log2: f64,
    /// log₂ of the predicted `‖b‖`.
    pub predicted_log2: f64,
    /// Threshold minus prediction, in bits; positive means feasible.
    pub margin_log2: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub params: Params,
    /// Lattice dimension `t + 2`.
    pub dimension: u64,
    pub pigeonhole: PigeonholeBound,
    /// Gaussian-heuristic estimate `log₂(√(t+2) · 2^{γ/(t+2)})`.
    pub lambda1_log2: f64,
    /// log₂ of the η-floor acceptance threshold `2^{η-1} / (8·t·2^ρ)`.
    pub threshold_log2: f64,
    /// Target used in the headline inequality: `η`.
    pub eta_log2: f64,
    pub block_bound: Option<BlockBound>,
    pub lll_average: Predictor,
    pub block: Option<Predictor>,
}

fn predictor(name: &'static str, factor_log2: f64, lambda1_log2: f64, threshold_log2: f64) -> Predictor {
    let predicted_log2 = factor_log2 + lambda1_log2;
    let margin_log2 = threshold_log2 - predicted_log2;
    Predictor {
        name,
        factor_log2,
        predicted_log2,
        margin_log2,
        feasible: margin_log2 > 0.0,
    }
}

/// Predicts the attack outcome with the average-case LLL factor `1.02^{t+2}`
/// and with the GHKN block bound at block size `k = λ` over dimension `t`.
///
/// The block predictor is omitted when `λ < 2` or `λ > t`.
pub fn feasibility_estimate(params: &Params) -> Result<FeasibilityReport> {
    let t = params.subset_size.min(params.tau);
    let dimension = t + 2;
    let pigeonhole = pigeonhole_log_bound(params.lambda, t, params.gamma);
    let lambda1_log2 = 0.5 * log2(dimension as f64) + params.gamma as f64 / dimension as f64;
    let threshold_log2 = params.eta as f64 - 1.0 - log2(8.0 * t as f64) - params.rho as f64;

    let lll_average = predictor(
        "lll-average",
        bound_lll_average_log2(dimension),
        lambda1_log2,
        threshold_log2,
    );
    let k = params.lambda as u64;
    let block_bound = bound_block_reduction(k, t, BlockVariant::Ghkn).ok();
    let block = block_bound.map(|b| predictor("block-ghkn", b.log2(), lambda1_log2, threshold_log2));
    Ok(FeasibilityReport {
        params: *params,
        dimension,
        pigeonhole,
        lambda1_log2,
        threshold_log2,
        eta_log2: params.eta as f64,
        block_bound,
        lll_average,
        block,
    })
}
