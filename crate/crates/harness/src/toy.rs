//! Small end-to-end demonstration: λ = 3, ρ = 3, η = 27, γ = 243, τ = 246,
//! attacked on the square lattice with the column-parity decision.

use std::fmt::Write as _;

use anyhow::{bail, ensure};
use fhe_lattice::attack::{acceptance_threshold, build_attack_lattice, decide_column_parity, LatticeVariant, ThresholdMode};
use fhe_lattice::dghv::{encrypt_traced, keygen};
use fhe_lattice::lattice::{determinant, lll_reduce, mat_mul, Delta};
use fhe_lattice::Params;
use num_bigint::BigInt;
use num_traits::One;
use rand::seq::index;
use rand::Rng;

use crate::seeds;

/// The toy parameter set.
pub fn toy_params() -> Params {
    Params {
        lambda: 3,
        rho: 3,
        eta: 27,
        gamma: 243,
        tau: 246,
        subset_size: 27,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToyOptions {
    pub seed: u64,
    /// Plaintext to encrypt; drawn from the seed when absent.
    pub bit: Option<u8>,
    pub max_subset_retries: usize,
}

impl Default for ToyOptions {
    fn default() -> Self {
        Self {
            seed: 1,
            bit: None,
            max_subset_retries: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToyTranscript {
    pub text: String,
    pub true_bit: u8,
    pub decision: Option<u8>,
    pub subsets_tried: usize,
    /// Rows of the last reduced basis printed.
    pub reduced_rows: usize,
}

fn matrix(name: &str, rows: &[Vec<BigInt>]) -> String {
    let body: Vec<String> = rows
        .iter()
        .map(|r| format!("[{}]", r.iter().map(BigInt::to_string).collect::<Vec<_>>().join(" ")))
        .collect();
    format!("{name} = [{}]\n", body.join("\n "))
}

fn bits(v: &[u8]) -> String {
    format!("[{}]", v.iter().map(u8::to_string).collect::<Vec<_>>().join(" "))
}

/// Generates an instrumented instance, encrypts one bit and attacks it with
/// the known-p threshold, printing the key, `B`, `U` and the parity vectors.
///
/// Fails if `U·C ≠ B`, `U` is not unimodular, or a conclusive verdict
/// contradicts the plaintext.
pub fn run_toy_repro(opts: &ToyOptions) -> anyhow::Result<ToyTranscript> {
    let params = toy_params();
    let t = params.subset_size as usize;
    let mut rng = seeds::rng(opts.seed);
    let kp = keygen(&params, &mut rng, true)?;
    let true_bit = match opts.bit {
        Some(b) if b > 1 => bail!("plaintext must be 0 or 1, got {b}"),
        Some(b) => b,
        None => rng.gen_range(0..=1),
    };
    let (c, _) = encrypt_traced(kp.public_key(), true_bit, &mut rng)?;
    let threshold = acceptance_threshold(&params, t, &ThresholdMode::KnownP(kp.sk_p.clone()))?;

    let mut out = String::new();

    writeln!(
        out,
        "lambda = {}, rho = {}, eta = {}, gamma = {}, tau = {}, t = {}",
        params.lambda, params.rho, params.eta, params.gamma, params.tau, t
    )?;
    writeln!(out, "seed = {}", opts.seed)?;
    writeln!(out, "p = {}", kp.sk_p)?;
    writeln!(out, "pk = [{}]", kp.pk_x.iter().map(BigInt::to_string).collect::<Vec<_>>().join("\n "))?;
    writeln!(out, "c = {}", c.value)?;
    writeln!(out, "threshold = {threshold}")?;

    let mut decision = None;
    let mut subsets_tried = 0;
    let mut reduced_rows = 0;
    for attempt in 0..opts.max_subset_retries {
        let mut subset: Vec<usize> = index::sample(&mut rng, kp.pk_x.len() - 1, t)
            .into_iter()
            .map(|i| i + 1)
            .collect();
        subset.sort_unstable();
        subsets_tried += 1;
        let basis = build_attack_lattice(&kp.pk_x, &c.value, &subset, LatticeVariant::L)?;
        let outcome = lll_reduce(&basis, Delta::default())?;
        ensure!(
            mat_mul(&outcome.transform, basis.rows())? == outcome.reduced.rows(),
            "U·C differs from B"
        );
        ensure!(determinant(&outcome.transform)?.magnitude().is_one(), "U is not unimodular");
        reduced_rows = outcome.reduced.rank();
        let cp = decide_column_parity(&outcome, &basis, &threshold);

        writeln!(out, "\nattempt {} subset = {subset:?}", attempt + 1)?;
        out.push_str(&matrix("B", outcome.reduced.rows()));
        out.push_str(&matrix("U", &outcome.transform));
        writeln!(out, "U*C = B: verified")?;
        let excluded: Vec<usize> = (0..reduced_rows).filter(|i| !cp.qualifying_rows.contains(i)).collect();
        writeln!(out, "rows within threshold = {:?}", cp.qualifying_rows)?;
        writeln!(out, "rows excluded = {excluded:?}")?;
        writeln!(out, "parity of first column of U = {}", bits(&cp.transform_parities))?;
        writeln!(out, "parity of first column of B = {}", bits(&cp.reduced_parities))?;
        match cp.decision {
            Some(bit) => {
                writeln!(out, "decision = {bit}")?;
                decision = Some(bit);
                break;
            }
            None => writeln!(out, "decision = inconclusive")?,
        }
    }
    writeln!(out, "\nplaintext = {true_bit}")?;
    match decision {
        Some(bit) => {
            ensure!(bit == true_bit, "verdict {bit} contradicts plaintext {true_bit}");
            writeln!(out, "verdict = {bit} (matches)")?;
        }
        None => writeln!(out, "verdict = inconclusive after {subsets_tried} subsets")?,
    }
    Ok(ToyTranscript {
        text: out,
        true_bit,
        decision,
        subsets_tried,
        reduced_rows,
    })
}
