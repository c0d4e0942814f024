//! Attack campaigns, γ sweeps and feasibility reports.

use std::time::Instant;

use anyhow::{ensure, Context};
use fhe_lattice::attack::{
    acceptance_threshold, attack_with_thresholds, feasibility_estimate, AttackConfig, AttackVerdict, FeasibilityReport,
    LatticeVariant, ThresholdMode,
};
use fhe_lattice::dghv::{encrypt_traced, keygen, DghvKeyPair};
use fhe_lattice::lattice::Delta;
use fhe_lattice::Params;
use num_bigint::BigInt;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::schema::ParamsRecord;
use crate::seeds::{self, KEY_STREAM};
use crate::{LIBRARY_VERSION, SCHEMA_VERSION};

/// Budget and attack knobs shared by every campaign-style run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentSpec {
    pub params: Params,
    pub instances: usize,
    pub ciphertexts_per_instance: usize,
    pub subset_size: usize,
    pub max_subset_retries: usize,
    pub candidate_scan_depth: usize,
    pub delta: Delta,
    pub variant: LatticeVariant,
    pub seed: u64,
    /// γ values for a sweep; empty means `{λ⁵, λ⁶}`.
    pub gammas: Vec<u64>,
}

impl ExperimentSpec {
    /// 20 instances × 5 ciphertexts with the default attack configuration.
    pub fn new(params: Params, seed: u64) -> Self {
        let cfg = AttackConfig::new(&params);
        Self {
            params,
            instances: 20,
            ciphertexts_per_instance: 5,
            subset_size: cfg.subset_size,
            max_subset_retries: cfg.max_subset_retries,
            candidate_scan_depth: cfg.candidate_scan_depth,
            delta: cfg.delta,
            variant: cfg.variant,
            seed,
            gammas: Vec::new(),
        }
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        ensure!(self.instances >= 1, "at least one instance is required");
        ensure!(self.ciphertexts_per_instance >= 1, "at least one ciphertext per instance is required");
        self.params.validate()?;
        self.attack_config().validate(&self.params)?;
        Ok(())
    }

    pub fn attack_config(&self) -> AttackConfig {
        AttackConfig {
            subset_size: self.subset_size,
            max_subset_retries: self.max_subset_retries,
            candidate_scan_depth: self.candidate_scan_depth,
            threshold_mode: ThresholdMode::EtaFloor,
            delta: self.delta,
            variant: self.variant,
        }
    }

    /// The same campaign at another γ, with τ = γ + λ.
    pub fn at_gamma(&self, gamma: u64) -> anyhow::Result<Self> {
        let params = self.params.with_gamma(gamma)?.with_tau(gamma + self.params.lambda as u64)?;
        Ok(Self {
            params,
            subset_size: self.subset_size.min(params.tau as usize),
            ..self.clone()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecEcho {
    pub params: ParamsRecord,
    pub instances: usize,
    pub ciphertexts_per_instance: usize,
    pub subset_size: usize,
    pub max_subset_retries: usize,
    pub candidate_scan_depth: usize,
    pub delta: String,
    pub variant: String,
    pub seed: u64,
}

impl From<&ExperimentSpec> for SpecEcho {
    fn from(s: &ExperimentSpec) -> Self {
        Self {
            params: s.params.into(),
            instances: s.instances,
            ciphertexts_per_instance: s.ciphertexts_per_instance,
            subset_size: s.subset_size,
            max_subset_retries: s.max_subset_retries,
            candidate_scan_depth: s.candidate_scan_depth,
            delta: s.delta.to_string(),
            variant: variant_name(s.variant).to_string(),
            seed: s.seed,
        }
    }
}

pub fn variant_name(v: LatticeVariant) -> &'static str {
    match v {
        LatticeVariant::L => "L",
        LatticeVariant::L1 => "L1",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Success,
    Failure,
    Inconclusive,
}

/// Verdict of one threshold mode on one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeRecord {
    pub outcome: Outcome,
    pub decision: Option<u8>,
    pub method: Option<String>,
    pub threshold: Option<String>,
    pub retries: usize,
    pub rows_scanned: usize,
    pub swaps: u64,
    /// Set when the threshold could not be computed for these parameters.
    pub error: Option<String>,
}

impl ModeRecord {
    fn from_verdict(v: &AttackVerdict, truth: u8) -> Self {
        let outcome = match v.decision {
            None => Outcome::Inconclusive,
            Some(b) if b == truth => Outcome::Success,
            Some(_) => Outcome::Failure,
        };
        Self {
            outcome,
            decision: v.decision,
            method: v.method.map(|m| m.as_str().to_string()),
            threshold: Some(v.threshold.to_string()),
            retries: v.subsets_tried,
            rows_scanned: v.rows_scanned,
            swaps: v.swaps,
            error: None,
        }
    }

    fn from_error(e: &fhe_lattice::Error) -> Self {
        Self {
            outcome: Outcome::Inconclusive,
            decision: None,
            method: None,
            threshold: None,
            retries: 0,
            rows_scanned: 0,
            swaps: 0,
            error: Some(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub instance: usize,
    pub ciphertext: usize,
    pub instance_seed: u64,
    pub trial_seed: u64,
    pub true_bit: u8,
    pub known_p: ModeRecord,
    pub eta_floor: ModeRecord,
    /// Wall-clock time of the attack call; not covered by determinism.
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub trials: usize,
    pub successes: usize,
    pub failures: usize,
    pub inconclusive: usize,
    /// Trials whose threshold could not be computed (counted as inconclusive).
    pub errors: usize,
    pub success_rate: f64,
    pub inconclusive_rate: f64,
}

impl ModeSummary {
    fn tally<'a>(records: impl Iterator<Item = &'a ModeRecord>) -> Self {
        let (mut trials, mut successes, mut failures, mut inconclusive, mut errors) = (0, 0, 0, 0, 0);
        for r in records {
            trials += 1;
            match r.outcome {
                Outcome::Success => successes += 1,
                Outcome::Failure => failures += 1,
                Outcome::Inconclusive => inconclusive += 1,
            }
            errors += usize::from(r.error.is_some());
        }
        let rate = |n: usize| if trials == 0 { 0.0 } else { n as f64 / trials as f64 };
        Self {
            trials,
            successes,
            failures,
            inconclusive,
            errors,
            success_rate: rate(successes),
            inconclusive_rate: rate(inconclusive),
        }
    }

    pub fn conclusive(&self) -> usize {
        self.successes + self.failures
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub library_version: String,
    pub mode: String,
    pub config: SpecEcho,
    pub known_p: ModeSummary,
    pub eta_floor: ModeSummary,
    /// Known-p trials whose conclusive verdict contradicts the plaintext.
    pub soundness_failures: usize,
    pub trials: Vec<TrialRecord>,
    pub total_wall_ms: f64,
}

impl ExperimentReport {
    /// Copy with every timing field zeroed, for reproducibility checks.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        r.total_wall_ms = 0.0;
        for t in &mut r.trials {
            t.wall_ms = 0.0;
        }
        r
    }
}

fn instance_keys(spec: &ExperimentSpec) -> anyhow::Result<Vec<(u64, DghvKeyPair)>> {
    (0..spec.instances)
        .into_par_iter()
        .map(|i| {
            let seed = seeds::derive(spec.seed, &[i as u64, KEY_STREAM]);
            let kp = keygen(&spec.params, &mut seeds::rng(seed), true)
                .with_context(|| format!("key generation for instance {i}"))?;
            Ok((seed, kp))
        })
        .collect()
}

fn run_trial(spec: &ExperimentSpec, kp: &DghvKeyPair, instance: usize, instance_seed: u64, ciphertext: usize) -> anyhow::Result<TrialRecord> {
    let trial_seed = seeds::derive(spec.seed, &[instance as u64, ciphertext as u64]);
    let mut rng = seeds::rng(trial_seed);
    let true_bit: u8 = rng.gen_range(0..=1);
    let (c, _) = encrypt_traced(kp.public_key(), true_bit, &mut rng)?;

    let modes = [ThresholdMode::KnownP(kp.sk_p.clone()), ThresholdMode::EtaFloor];
    let thresholds: Vec<Result<BigInt, fhe_lattice::Error>> = modes
        .iter()
        .map(|m| acceptance_threshold(&spec.params, spec.subset_size, m))
        .collect();
    let usable: Vec<BigInt> = thresholds.iter().filter_map(|t| t.as_ref().ok().cloned()).collect();

    let start = Instant::now();
    let mut verdicts = if usable.is_empty() {
        Vec::new()
    } else {
        attack_with_thresholds(kp.public_key(), &c, &spec.attack_config(), &usable, &mut rng)?
    }
    .into_iter();
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;

    let mut records = thresholds.iter().map(|t| match t {
        Ok(_) => ModeRecord::from_verdict(&verdicts.next().expect("one verdict per usable threshold"), true_bit),
        Err(e) => ModeRecord::from_error(e),
    });
    Ok(TrialRecord {
        instance,
        ciphertext,
        instance_seed,
        trial_seed,
        true_bit,
        known_p: records.next().expect("known-p record"),
        eta_floor: records.next().expect("eta-floor record"),
        wall_ms,
    })
}

/// Generates instrumented instances, encrypts random bits and attacks each
/// ciphertext under both the known-p and the η-floor threshold.
///
/// Every trial draws from its own generator seeded by
/// `(seed, instance, ciphertext)`, so the report does not depend on the
/// number of worker threads.
pub fn run_attack_campaign(spec: &ExperimentSpec) -> anyhow::Result<ExperimentReport> {
    spec.validate()?;
    let start = Instant::now();
    let keys = instance_keys(spec)?;
    let jobs: Vec<(usize, usize)> = (0..spec.instances)
        .flat_map(|i| (0..spec.ciphertexts_per_instance).map(move |j| (i, j)))
        .collect();
    let trials = jobs
        .into_par_iter()
        .map(|(i, j)| run_trial(spec, &keys[i].1, i, keys[i].0, j))
        .collect::<anyhow::Result<Vec<_>>>()?;

    let known_p = ModeSummary::tally(trials.iter().map(|t| &t.known_p));
    let eta_floor = ModeSummary::tally(trials.iter().map(|t| &t.eta_floor));
    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        library_version: LIBRARY_VERSION.to_string(),
        mode: "attack-campaign".to_string(),
        config: spec.into(),
        soundness_failures: known_p.failures,
        known_p,
        eta_floor,
        trials,
        total_wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Feasibility prediction in serializable form, all sizes as log₂.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub schema_version: u32,
    pub params: ParamsRecord,
    pub dimension: u64,
    pub pigeonhole_coeff_log2: u64,
    pub pigeonhole_count_log2: u64,
    pub pigeonhole_holds: bool,
    pub lambda1_log2: f64,
    pub threshold_log2: f64,
    pub eta_log2: f64,
    pub lll_average_factor_log2: f64,
    pub lll_average_predicted_log2: f64,
    pub lll_average_margin_log2: f64,
    pub lll_average_feasible: bool,
    pub block_k: Option<u64>,
    pub block_factor_log2: Option<f64>,
    /// Block approximation factor divided by λ².
    pub block_factor_per_lambda_sq: Option<f64>,
    /// Factor times a `2^{λ²}` short vector, again in units of λ².
    pub block_target_per_lambda_sq: Option<f64>,
    pub block_margin_log2: Option<f64>,
    pub block_feasible: Option<bool>,
}

impl From<&FeasibilityReport> for EstimateRecord {
    fn from(r: &FeasibilityReport) -> Self {
        let l2 = (r.params.lambda as f64).powi(2);
        let block_log2 = r.block_bound.as_ref().map(|b| b.log2());
        Self {
            schema_version: SCHEMA_VERSION,
            params: r.params.into(),
            dimension: r.dimension,
            pigeonhole_coeff_log2: r.pigeonhole.coeff_log2,
            pigeonhole_count_log2: r.pigeonhole.count_log2,
            pigeonhole_holds: r.pigeonhole.holds,
            lambda1_log2: r.lambda1_log2,
            threshold_log2: r.threshold_log2,
            eta_log2: r.eta_log2,
            lll_average_factor_log2: r.lll_average.factor_log2,
            lll_average_predicted_log2: r.lll_average.predicted_log2,
            lll_average_margin_log2: r.lll_average.margin_log2,
            lll_average_feasible: r.lll_average.feasible,
            block_k: r.block_bound.as_ref().map(|b| b.k),
            block_factor_log2: block_log2,
            block_factor_per_lambda_sq: block_log2.map(|b| b / l2),
            block_target_per_lambda_sq: block_log2.map(|b| (b + l2) / l2),
            block_margin_log2: r.block.as_ref().map(|p| p.margin_log2),
            block_feasible: r.block.as_ref().map(|p| p.feasible),
        }
    }
}

pub fn run_estimate(params: &Params) -> anyhow::Result<EstimateRecord> {
    Ok(EstimateRecord::from(&feasibility_estimate(params)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub gamma: u64,
    pub estimate: EstimateRecord,
    pub report: ExperimentReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub library_version: String,
    pub mode: String,
    pub entries: Vec<SweepEntry>,
}

impl SweepReport {
    pub fn soundness_failures(&self) -> usize {
        self.entries.iter().map(|e| e.report.soundness_failures).sum()
    }

    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        for e in &mut r.entries {
            e.report = e.report.without_timings();
        }
        r
    }
}

/// Runs the same campaign (same seed and budget) once per γ, with τ = γ + λ.
pub fn run_gamma_sweep(spec: &ExperimentSpec) -> anyhow::Result<SweepReport> {
    let l = spec.params.lambda as u64;
    let gammas = if spec.gammas.is_empty() {
        vec![l.pow(5), l.pow(6)]
    } else {
        spec.gammas.clone()
    };
    let entries = gammas
        .into_iter()
        .map(|gamma| {
            let s = spec.at_gamma(gamma)?;
            Ok(SweepEntry {
                gamma,
                estimate: run_estimate(&s.params)?,
                report: run_attack_campaign(&s)?,
            })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(SweepReport {
        schema_version: SCHEMA_VERSION,
        library_version: LIBRARY_VERSION.to_string(),
        mode: "gamma-sweep".to_string(),
        entries,
    })
}

/// One CSV row per trial.
#[derive(Debug, Serialize)]
struct TrialRow<'a> {
    instance: usize,
    ciphertext: usize,
    instance_seed: u64,
    trial_seed: u64,
    true_bit: u8,
    known_p_outcome: Outcome,
    known_p_decision: Option<u8>,
    known_p_method: Option<&'a str>,
    known_p_retries: usize,
    eta_floor_outcome: Outcome,
    eta_floor_decision: Option<u8>,
    eta_floor_method: Option<&'a str>,
    eta_floor_retries: usize,
    wall_ms: f64,
}

pub fn campaign_csv(report: &ExperimentReport) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for t in &report.trials {
        w.serialize(TrialRow {
            instance: t.instance,
            ciphertext: t.ciphertext,
            instance_seed: t.instance_seed,
            trial_seed: t.trial_seed,
            true_bit: t.true_bit,
            known_p_outcome: t.known_p.outcome,
            known_p_decision: t.known_p.decision,
            known_p_method: t.known_p.method.as_deref(),
            known_p_retries: t.known_p.retries,
            eta_floor_outcome: t.eta_floor.outcome,
            eta_floor_decision: t.eta_floor.decision,
            eta_floor_method: t.eta_floor.method.as_deref(),
            eta_floor_retries: t.eta_floor.retries,
            wall_ms: t.wall_ms,
        })?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[derive(Debug, Serialize)]
struct SweepRow {
    gamma: u64,
    mode: &'static str,
    trials: usize,
    successes: usize,
    failures: usize,
    inconclusive: usize,
    success_rate: f64,
    predicted_margin_log2: f64,
    predicted_feasible: bool,
}

/// One CSV row per (γ, threshold mode).
pub fn sweep_csv(report: &SweepReport) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for e in &report.entries {
        for (mode, s) in [("known-p", &e.report.known_p), ("eta-floor", &e.report.eta_floor)] {
            w.serialize(SweepRow {
                gamma: e.gamma,
                mode,
                trials: s.trials,
                successes: s.successes,
                failures: s.failures,
                inconclusive: s.inconclusive,
                success_rate: s.success_rate,
                predicted_margin_log2: e.estimate.lll_average_margin_log2,
                predicted_feasible: e.estimate.lll_average_feasible,
            })?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
