//! Round-trip and homomorphic property suites for both schemes.

use fhe_lattice::arith::{self, pow2};
use fhe_lattice::dghv::{self, Ciphertext, DghvKeyPair};
use fhe_lattice::matshe::{self, Mat2, MatCiphertext, MatSheConfig, MatSheKeyPair, MatSheVariant};
use fhe_lattice::Params;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::seeds::{self, KEY_STREAM};
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Dghv,
    Matshe,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    /// Cases outside the check's precondition, e.g. over the noise budget.
    pub skipped: usize,
}

impl CheckResult {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            passed: 0,
            failed: 0,
            skipped: 0,
        }
    }

    fn record(&mut self, ok: bool) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub schema_version: u32,
    pub scheme: Scheme,
    pub lambda: u32,
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().map(|c| c.failed).sum()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Trials per generated key.
const TRIALS_PER_KEY: usize = 100;

pub fn run_scheme_selftest(lambda: u32, scheme: Scheme, trials: usize, seed: u64) -> anyhow::Result<SelftestReport> {
    let checks = match scheme {
        Scheme::Dghv => dghv_suite(&Params::from_lambda(lambda)?, trials, seed)?,
        Scheme::Matshe => {
            let mut checks = Vec::new();
            for (tag, variant) in [(0, MatSheVariant::RandomT), (1, MatSheVariant::Gaussian)] {
                let config = MatSheConfig::new(lambda, variant)?;
                let name = crate::schema::variant_tag(variant);
                for mut c in matshe_suite(&config, trials, seeds::derive(seed, &[tag]))? {
                    c.name = format!("{name}/{}", c.name);
                    checks.push(c);
                }
            }
            checks
        }
    };
    Ok(SelftestReport {
        schema_version: SCHEMA_VERSION,
        scheme,
        lambda,
        trials,
        seed,
        checks,
    })
}

/// Worst-case fresh noise magnitude accepted by the suites: `2^{ρ+2}·(τ+2)`.
pub fn dghv_fresh_noise_bound(params: &Params) -> BigInt {
    pow2(params.rho + 2) * (params.tau + 2)
}

fn dghv_keys(params: &Params, trials: usize, seed: u64) -> anyhow::Result<Vec<DghvKeyPair>> {
    (0..trials.div_ceil(TRIALS_PER_KEY))
        .map(|k| Ok(dghv::keygen(params, &mut seeds::rng(seeds::derive(seed, &[k as u64, KEY_STREAM])), true)?))
        .collect()
}

fn dghv_suite(params: &Params, trials: usize, seed: u64) -> anyhow::Result<Vec<CheckResult>> {
    let mut round_trip = CheckResult::new("round-trip");
    let mut noise = CheckResult::new("fresh-noise-bound");
    let mut add = CheckResult::new("eval-add");
    let mut mul = CheckResult::new("eval-mul");
    let mut mul_raw = CheckResult::new("mul-unreduced");
    let bound = dghv_fresh_noise_bound(params);
    let keys = dghv_keys(params, trials, seed)?;
    for i in 0..trials {
        let kp = &keys[i / TRIALS_PER_KEY];
        let mut rng = seeds::rng(seeds::derive(seed, &[i as u64]));
        let (m1, m2): (u8, u8) = (rng.gen_range(0..=1), rng.gen_range(0..=1));
        let c1 = dghv::encrypt(kp.public_key(), m1, &mut rng)?;
        let c2 = dghv::encrypt(kp.public_key(), m2, &mut rng)?;
        round_trip.record(dghv::decrypt(&kp.sk_p, &c1) == m1 && dghv::decrypt(&kp.sk_p, &c2) == m2);
        let (n1, n2) = (dghv::noise_of(&kp.sk_p, &c1), dghv::noise_of(&kp.sk_p, &c2));
        noise.record(n1.abs() <= bound && n2.abs() <= bound);

        let sum = &c1.value + &c2.value;
        homomorphic(kp, &sum, &dghv::eval_add(&c1, &c2, kp.x0()), &n1 + &n2, m1 ^ m2, &mut add);
        let product = &c1.value * &c2.value;
        homomorphic(kp, &product, &dghv::eval_mul(&c1, &c2, kp.x0()), &n1 * &n2, m1 & m2, &mut mul);
        let raw = Ciphertext::new(product.clone());
        homomorphic(kp, &product, &raw, &n1 * &n2, m1 & m2, &mut mul_raw);
    }
    Ok(vec![round_trip, noise, add, mul, mul_raw])
}

/// Checks a combined ciphertext `c = [raw]_{x0}` against the noise `n` of
/// `raw`. Reducing by `k·x0` shifts the noise by `-k·[x0]_p`, so the expected
/// noise is known exactly; cases where it leaves `(-p/2, p/2)` are skipped.
fn homomorphic(kp: &DghvKeyPair, raw: &BigInt, c: &Ciphertext, n: BigInt, m: u8, check: &mut CheckResult) {
    let k = (raw - &c.value) / kp.x0();
    let x0_noise = dghv::noise_of(&kp.sk_p, &Ciphertext::new(kp.x0().clone()));
    let expected = n - k * x0_noise;
    if expected.abs() * 2u32 >= kp.sk_p {
        check.skipped += 1;
        return;
    }
    check.record(dghv::decrypt(&kp.sk_p, c) == m && dghv::noise_of(&kp.sk_p, c) == expected);
}

fn mat_keys(config: &MatSheConfig, trials: usize, seed: u64) -> anyhow::Result<Vec<MatSheKeyPair>> {
    (0..trials.div_ceil(TRIALS_PER_KEY).max(1))
        .map(|k| {
            let mut rng = seeds::rng(seeds::derive(seed, &[k as u64, KEY_STREAM]));
            Ok(matshe::mat_keygen(config, &mut rng, true)?)
        })
        .collect()
}

/// Encryption with a single `k_i ∈ {±1}` and the rest zero, leaving room in
/// the budget for one multiplication.
fn light_encrypt(kp: &MatSheKeyPair, m: u8, rng: &mut ChaCha8Rng) -> anyhow::Result<MatCiphertext> {
    let mut ks = vec![BigInt::zero(); kp.public_b.len()];
    let i = rng.gen_range(0..ks.len());
    ks[i] = BigInt::from(if rng.gen::<bool>() { 1 } else { -1 });
    let r = arith::uniform_symmetric(rng, kp.config.lambda as u64);
    Ok(matshe::mat_encrypt_with(kp.public_key(), m, &ks, &r)?)
}

fn matshe_suite(config: &MatSheConfig, trials: usize, seed: u64) -> anyhow::Result<Vec<CheckResult>> {
    let mut key_checks = CheckResult::new("key-identities");
    let mut round_trip = CheckResult::new("round-trip");
    let mut parity = CheckResult::new("noise-parity");
    let mut add = CheckResult::new("add-identity");
    let mut mul = CheckResult::new("mul-identity");
    let keys = mat_keys(config, trials, seed)?;
    for kp in &keys {
        key_checks.record(key_identities_hold(kp));
    }
    for i in 0..trials {
        let kp = &keys[i / TRIALS_PER_KEY];
        let n = &kp.modulus;
        let mut rng = seeds::rng(seeds::derive(seed, &[i as u64]));
        let (m1, m2): (u8, u8) = (rng.gen_range(0..=1), rng.gen_range(0..=1));
        let c1 = matshe::mat_encrypt(kp.public_key(), m1, &mut rng)?;
        let c2 = matshe::mat_encrypt(kp.public_key(), m2, &mut rng)?;
        round_trip.record(matshe::mat_decrypt(kp, &c1) == m1 && matshe::mat_decrypt(kp, &c2) == m2);

        let (Ok(s1), Ok(s2)) = (matshe::mat_noise_of(kp, &c1), matshe::mat_noise_of(kp, &c2)) else {
            parity.record(false);
            continue;
        };
        parity.record(arith::parity(&s1) == m1 && arith::parity(&s2) == m2);
        identity(kp, &matshe::mat_add(&c1, &c2, n), &s1 + &s2, m1 ^ m2, &mut add);
        identity(kp, &matshe::mat_mul(&c1, &c2, n), &s1 * &s2, m1 & m2, &mut mul);

        // a product that always fits the budget
        let l1 = light_encrypt(kp, m1, &mut rng)?;
        let l2 = light_encrypt(kp, m2, &mut rng)?;
        let (s1, s2) = (matshe::mat_noise_of(kp, &l1)?, matshe::mat_noise_of(kp, &l2)?);
        identity(kp, &matshe::mat_mul(&l1, &l2, n), &s1 * &s2, m1 & m2, &mut mul);
    }
    Ok(vec![key_checks, round_trip, parity, add, mul])
}

fn identity(kp: &MatSheKeyPair, c: &MatCiphertext, expected: BigInt, m: u8, check: &mut CheckResult) {
    if !matshe::within_budget(kp, &expected) {
        check.skipped += 1;
        return;
    }
    let ok = matshe::mat_noise_of(kp, c).is_ok_and(|s| s == expected) && matshe::mat_decrypt(kp, c) == m;
    check.record(ok);
}

/// `A·T = p·I`, `B_i·T ≡ 2r_i·T (mod p)`, and for the Gaussian variant
/// `a² + b² = p`.
pub fn key_identities_hold(kp: &MatSheKeyPair) -> bool {
    let p = &kp.secret_modulus;
    if &kp.a * &kp.t != Mat2::scalar(p.clone()) {
        return false;
    }
    if let Some(noise) = &kp.noise {
        for (b, r) in kp.public_b.iter().zip(noise) {
            let lhs = (b * &kp.t).centered(p);
            let rhs = kp.t.scale(&(r * 2u32)).centered(p);
            if lhs != rhs {
                return false;
            }
        }
    }
    if kp.config.variant == MatSheVariant::Gaussian {
        let (a, b) = (kp.t.get(0, 0), kp.t.get(0, 1));
        if a * a + b * b != *p || kp.t != Mat2::new(a.clone(), b.clone(), -b, a.clone()) {
            return false;
        }
    }
    true
}
