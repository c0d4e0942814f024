//! Plaintext recovery from DGHV ciphertexts by lattice reduction.
//!
//! For a ciphertext `c` and a subset `S` of the public integers, the lattice
//! `L1` has rows `(c, 1, 0, …)`, `(-x_i, 0, e_i)` for `i ∈ S` and
//! `(-x0, 0, e_last)`. A row combination with coefficients `(y, y_1.., y_0)`
//! is `(y·c - Σ y_i x_i - y_0 x0, y, y_1, …, y_0)`. When all of its entries
//! are small the first coordinate carries no multiple of `p`, so it is the
//! noise combination `2(…) + y·m`, and for odd `y` its parity is `m`.

mod estimate;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::seq::index;
use rand::Rng;

use crate::arith::{centered_mod_unchecked, parity, pow2};
use crate::dghv::{Ciphertext, PublicKey};
use crate::lattice::{lll_reduce, within_inf, Delta, IntMatrix, LatticeBasis, ReductionOutcome};
use crate::{Error, Params, Result};

pub use estimate::{feasibility_estimate, pigeonhole_log_bound, FeasibilityReport, PigeonholeBound, Predictor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeVariant {
    /// Square `(t+2)×(t+2)` basis; the `c` coefficient is only visible in the transform.
    L,
    /// `(t+2)×(t+3)` basis with a tracking column for the `c` coefficient.
    L1,
}

/// How the acceptance threshold is obtained.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ThresholdMode {
    /// Uses the secret `p`; for validation on instrumented instances.
    KnownP(BigInt),
    /// Attacker view: `2^{η-1} ≤ p` replaces `p`.
    EtaFloor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackConfig {
    pub subset_size: usize,
    pub max_subset_retries: usize,
    pub candidate_scan_depth: usize,
    pub threshold_mode: ThresholdMode,
    pub delta: Delta,
    pub variant: LatticeVariant,
}

impl AttackConfig {
    /// Subset size `min(t, τ)`, 5 retries, scan depth 5, η-floor threshold,
    /// δ = 3/4 on `L1`.
    pub fn new(params: &Params) -> Self {
        Self {
            subset_size: params.subset_size.min(params.tau) as usize,
            max_subset_retries: 5,
            candidate_scan_depth: 5,
            threshold_mode: ThresholdMode::EtaFloor,
            delta: Delta::default(),
            variant: LatticeVariant::L1,
        }
    }

    pub fn validate(&self, params: &Params) -> Result<()> {
        if self.subset_size == 0 || self.subset_size as u64 > params.tau {
            return Err(Error::InvalidParams(format!(
                "subset size {} must lie in 1..={}",
                self.subset_size, params.tau
            )));
        }
        if self.candidate_scan_depth == 0 {
            return Err(Error::InvalidParams("candidate scan depth must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecisionMethod {
    FirstVectorParity,
    ColumnParity,
}

impl DecisionMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::FirstVectorParity => "first-vector-parity",
            Self::ColumnParity => "column-parity",
        }
    }
}

/// A short lattice vector: `b0 = y·c - Σ y_i x_i - y_0·x0` with its
/// coefficient row `(y, y_1, …, y_t, y_0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// Index of the row in the reduced basis.
    pub row: usize,
    pub b0: BigInt,
    pub coefficients: Vec<BigInt>,
}

impl Witness {
    pub fn y(&self) -> &BigInt {
        &self.coefficients[0]
    }

    fn from_row(outcome: &ReductionOutcome, row: usize) -> Self {
        Self {
            row,
            b0: outcome.reduced.row(row)[0].clone(),
            coefficients: outcome.transform[row].clone(),
        }
    }

    fn qualifies(outcome: &ReductionOutcome, row: usize, threshold: &BigInt) -> bool {
        let limit = threshold - 1u32;
        within_inf(outcome.reduced.row(row), &limit) && within_inf(&outcome.transform[row], &limit)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackVerdict {
    /// Recovered bit, or `None` when inconclusive.
    pub decision: Option<u8>,
    pub method: Option<DecisionMethod>,
    pub witness: Option<Witness>,
    /// Public-key indices of the subset behind the decision (the last one
    /// tried when inconclusive).
    pub subset_used: Vec<usize>,
    pub rows_scanned: usize,
    pub threshold: BigInt,
    /// Number of subsets reduced.
    pub subsets_tried: usize,
    pub swaps: u64,
}

impl AttackVerdict {
    pub fn is_conclusive(&self) -> bool {
        self.decision.is_some()
    }
}

/// Builds `L` or `L1` for ciphertext `c` and the public integers indexed by
/// `subset` (`x0` always takes the last row).
pub fn build_attack_lattice(pk_x: &[BigInt], c: &BigInt, subset: &[usize], variant: LatticeVariant) -> Result<LatticeBasis> {
    if subset.is_empty() {
        return Err(Error::Domain("attack subset must be nonempty".into()));
    }
    let tau = pk_x.len().saturating_sub(1);
    let mut seen = vec![false; pk_x.len()];
    for &i in subset {
        if i == 0 {
            return Err(Error::Domain("index 0 (x0) cannot be part of the subset".into()));
        }
        if i > tau {
            return Err(Error::Domain(format!("subset index {i} outside 1..={tau}")));
        }
        if core::mem::replace(&mut seen[i], true) {
            return Err(Error::Domain(format!("duplicate subset index {i}")));
        }
    }
    let t = subset.len();
    let id_offset = match variant {
        LatticeVariant::L => 1,
        LatticeVariant::L1 => 2,
    };
    let ncols = t + 1 + id_offset;
    let mut rows: IntMatrix = Vec::with_capacity(t + 2);
    let mut first = vec![BigInt::zero(); ncols];
    first[0] = c.clone();
    if variant == LatticeVariant::L1 {
        first[1] = BigInt::from(1);
    }
    rows.push(first);
    for (pos, &i) in subset.iter().chain(core::iter::once(&0)).enumerate() {
        let mut row = vec![BigInt::zero(); ncols];
        row[0] = -&pk_x[i];
        row[id_offset + pos] = BigInt::from(1);
        rows.push(row);
    }
    LatticeBasis::new(rows)
}

/// Infinity-norm bound for accepted vectors: `floor(P / (8·t·2^ρ))` with `P`
/// the known `p` or the floor `2^{η-1}`.
pub fn acceptance_threshold(params: &Params, subset_size: usize, mode: &ThresholdMode) -> Result<BigInt> {
    if params.rho >= params.eta {
        return Err(Error::ParamsTooSmall(format!(
            "rho = {} >= eta = {}",
            params.rho, params.eta
        )));
    }
    let numerator = match mode {
        ThresholdMode::KnownP(p) => p.clone(),
        ThresholdMode::EtaFloor => pow2(params.eta - 1),
    };
    let denom = BigInt::from(8u64 * subset_size.max(1) as u64) << params.rho;
    let threshold = numerator / denom;
    if threshold < BigInt::from(2) {
        return Err(Error::ParamsTooSmall(format!(
            "acceptance threshold {threshold} < 2"
        )));
    }
    Ok(threshold)
}

/// Reduced rows among the first `depth` whose entries and coefficients are
/// all below `threshold` in absolute value and whose `c` coefficient is odd.
pub fn scan_candidates(outcome: &ReductionOutcome, threshold: &BigInt, depth: usize) -> Vec<Witness> {
    (0..depth.min(outcome.reduced.rank()))
        .filter(|&i| outcome.transform[i][0].is_odd() && Witness::qualifies(outcome, i, threshold))
        .map(|i| Witness::from_row(outcome, i))
        .collect()
}

pub fn decide_first_vector(candidate: &Witness) -> u8 {
    parity(&candidate.b0)
}

/// Parities of the combination column and of the `c`-coefficient column over
/// the rows that stay below the threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnParity {
    pub decision: Option<u8>,
    pub qualifying_rows: Vec<usize>,
    pub reduced_parities: Vec<u8>,
    pub transform_parities: Vec<u8>,
    /// First qualifying row with odd `c` coefficient.
    pub witness: Option<Witness>,
}

/// Compares parities of `b0` and `y` over all small rows.
///
/// For a noise-only row `b0 ≡ y·m (mod 2)`, so all-equal columns mean 1 and
/// any mismatch means 0. The rule needs a qualifying row with odd `y`: an
/// even-`y` row has `b0` even whatever `m` is, so rows of that kind alone
/// cannot tell the bits apart.
pub fn decide_column_parity(outcome: &ReductionOutcome, original: &LatticeBasis, threshold: &BigInt) -> ColumnParity {
    debug_assert_eq!(
        crate::lattice::mat_mul(&outcome.transform, original.rows()).ok().as_deref(),
        Some(outcome.reduced.rows())
    );
    let qualifying_rows: Vec<usize> = (0..outcome.reduced.rank())
        .filter(|&i| Witness::qualifies(outcome, i, threshold))
        .collect();
    let reduced_parities: Vec<u8> = qualifying_rows.iter().map(|&i| parity(&outcome.reduced.row(i)[0])).collect();
    let transform_parities: Vec<u8> = qualifying_rows.iter().map(|&i| parity(&outcome.transform[i][0])).collect();
    let witness = qualifying_rows
        .iter()
        .find(|&&i| outcome.transform[i][0].is_odd())
        .map(|&i| Witness::from_row(outcome, i));
    let decision = witness
        .as_ref()
        .map(|_| u8::from(reduced_parities == transform_parities));
    ColumnParity {
        decision,
        qualifying_rows,
        reduced_parities,
        transform_parities,
        witness,
    }
}

/// Runs the attack with the threshold from `config.threshold_mode`.
pub fn attack<R: Rng + ?Sized>(
    pk: PublicKey<'_>,
    c: &Ciphertext,
    config: &AttackConfig,
    rng: &mut R,
) -> Result<AttackVerdict> {
    let threshold = acceptance_threshold(pk.params, config.subset_size, &config.threshold_mode)?;
    let mut out = attack_with_thresholds(pk, c, config, core::slice::from_ref(&threshold), rng)?;
    Ok(out.pop().expect("one verdict per threshold"))
}

/// Runs the attack for several thresholds at once, sharing the reductions.
///
/// Subsets are drawn from `rng` exactly as [`attack`] draws them, and each
/// threshold stops consuming reductions once it is conclusive, so verdict `i`
/// equals what `attack` returns for `thresholds[i]` with the same seed.
pub fn attack_with_thresholds<R: Rng + ?Sized>(
    pk: PublicKey<'_>,
    c: &Ciphertext,
    config: &AttackConfig,
    thresholds: &[BigInt],
    rng: &mut R,
) -> Result<Vec<AttackVerdict>> {
    config.validate(pk.params)?;
    let mut verdicts: Vec<AttackVerdict> = thresholds
        .iter()
        .map(|t| AttackVerdict {
            decision: None,
            method: None,
            witness: None,
            subset_used: Vec::new(),
            rows_scanned: 0,
            threshold: t.clone(),
            subsets_tried: 0,
            swaps: 0,
        })
        .collect();

    for _ in 0..config.max_subset_retries {
        if verdicts.iter().all(AttackVerdict::is_conclusive) {
            break;
        }
        let mut subset: Vec<usize> = index::sample(rng, pk.tau(), config.subset_size)
            .into_iter()
            .map(|i| i + 1)
            .collect();
        subset.sort_unstable();
        let basis = build_attack_lattice(pk.x, &c.value, &subset, config.variant)?;
        let outcome = lll_reduce(&basis, config.delta)?;

        for v in verdicts.iter_mut().filter(|v| !v.is_conclusive()) {
            v.subsets_tried += 1;
            v.swaps += outcome.swaps;
            v.subset_used = subset.clone();
            let depth = config.candidate_scan_depth.min(outcome.reduced.rank());
            v.rows_scanned += depth;
            if let Some(w) = scan_candidates(&outcome, &v.threshold, depth).into_iter().next() {
                v.decision = Some(decide_first_vector(&w));
                v.method = Some(DecisionMethod::FirstVectorParity);
                v.witness = Some(w);
                continue;
            }
            v.rows_scanned += outcome.reduced.rank() - depth;
            let cp = decide_column_parity(&outcome, &basis, &v.threshold);
            if let Some(bit) = cp.decision {
                v.decision = Some(bit);
                v.method = Some(DecisionMethod::ColumnParity);
                v.witness = cp.witness;
            }
        }
    }
    Ok(verdicts)
}

/// Multiple of `p` left in a witness' combination value, computed from the
/// secret key: `b0 - (y·[c]_p - Σ y_i [x_i]_p)` divided by `p`.
///
/// Zero for every sound acceptance.
pub fn surviving_p_multiple(pk_x: &[BigInt], c: &BigInt, subset: &[usize], witness: &Witness, p: &BigInt) -> BigInt {
    let noise = |v: &BigInt| centered_mod_unchecked(v, p);
    let mut combo = witness.y() * noise(c);
    for (coef, &i) in witness.coefficients[1..].iter().zip(subset.iter().chain(core::iter::once(&0))) {
        combo -= coef * noise(&pk_x[i]);
    }
    (&witness.b0 - combo) / p
}

/// A Diophantine inequality instance: small `y_i`, not all zero, with
/// `|Σ y_i x_i| < P/8` and `|y_i| < P/(8·t·2^ρ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DieInstance {
    pub xs: Vec<BigInt>,
    /// `p` (known-p) or the floor `2^{η-1}`.
    pub modulus_bound: BigInt,
    pub subset_size: usize,
    pub rho: u64,
}

impl DieInstance {
    pub fn new(xs: Vec<BigInt>, params: &Params, subset_size: usize, mode: &ThresholdMode) -> Self {
        let modulus_bound = match mode {
            ThresholdMode::KnownP(p) => p.clone(),
            ThresholdMode::EtaFloor => pow2(params.eta - 1),
        };
        Self {
            xs,
            modulus_bound,
            subset_size,
            rho: params.rho,
        }
    }

    /// The instance `(c, x_{s_1}, …, x_{s_t}, x0)` behind an attack lattice.
    /// A witness maps to the solution `(y, -y_1, …, -y_t, -y_0)`.
    pub fn from_attack(pk_x: &[BigInt], c: &BigInt, subset: &[usize], params: &Params, mode: &ThresholdMode) -> Self {
        let xs = core::iter::once(c.clone())
            .chain(subset.iter().chain(core::iter::once(&0)).map(|&i| pk_x[i].clone()))
            .collect();
        Self::new(xs, params, subset.len(), mode)
    }

    /// `P/(8·t·2^ρ)` rounded down.
    pub fn bound_y(&self) -> BigInt {
        &self.modulus_bound / (BigInt::from(8u64 * self.subset_size as u64) << self.rho)
    }
}

pub fn witness_as_die_solution(witness: &Witness) -> Vec<BigInt> {
    let mut ys = witness.coefficients.clone();
    for y in ys.iter_mut().skip(1) {
        *y = -&*y;
    }
    ys
}

pub fn check_die_solution(inst: &DieInstance, ys: &[BigInt]) -> bool {
    if ys.len() != inst.xs.len() || ys.iter().all(Zero::is_zero) {
        return false;
    }
    // |y| < P/(8t2^ρ)  <=>  |y|·8t·2^ρ < P
    let scale = BigInt::from(8u64 * inst.subset_size as u64) << inst.rho;
    if ys.iter().any(|y| y.abs() * &scale >= inst.modulus_bound) {
        return false;
    }
    let sum: BigInt = ys.iter().zip(&inst.xs).map(|(y, x)| y * x).sum();
    sum.abs() * 8u32 < inst.modulus_bound
}
