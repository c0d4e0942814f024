//! The DGHV somewhat-homomorphic scheme over the integers.
//!
//! Public key: `x0 = q0·p + 2r0` with `q0` the largest odd multiplier, and
//! `x_i = [q_i·p + 2r_i]_{x0}`. A bit `m` encrypts to
//! `[m + 2r + Σ_{i∈T} x_i]_{x0}` for a random subset `T`; decryption is
//! `([c]_p) mod 2`.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::arith::{centered_mod_unchecked, parity, pow2, uniform_inclusive, uniform_symmetric};
use crate::{Error, Params, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    pub value: BigInt,
}

impl Ciphertext {
    pub fn new(value: BigInt) -> Self {
        Self { value }
    }
}

impl From<BigInt> for Ciphertext {
    fn from(value: BigInt) -> Self {
        Self { value }
    }
}

/// Secret multipliers and noises sampled during key generation.
///
/// Only kept for instrumented experiments; never part of a public record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyTrace {
    /// `q_0..q_τ` as sampled (before reduction of `x_i` modulo `x0`).
    pub q: Vec<BigInt>,
    /// `r_0..r_τ`.
    pub r: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DghvKeyPair {
    pub params: Params,
    /// Secret odd η-bit integer.
    pub sk_p: BigInt,
    /// `x_0..x_τ`.
    pub pk_x: Vec<BigInt>,
    pub trace: Option<KeyTrace>,
}

impl DghvKeyPair {
    pub fn x0(&self) -> &BigInt {
        &self.pk_x[0]
    }

    pub fn public_key(&self) -> PublicKey<'_> {
        PublicKey {
            params: &self.params,
            x: &self.pk_x,
        }
    }
}

/// Borrowed public part of a key pair.
#[derive(Debug, Clone, Copy)]
pub struct PublicKey<'a> {
    pub params: &'a Params,
    pub x: &'a [BigInt],
}

impl PublicKey<'_> {
    pub fn x0(&self) -> &BigInt {
        &self.x[0]
    }

    pub fn tau(&self) -> usize {
        self.x.len() - 1
    }
}

/// Randomness used by one encryption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncryptionTrace {
    pub m: u8,
    pub r: BigInt,
    /// Indices in `1..=τ`, ascending.
    pub subset: Vec<usize>,
    /// Number of `x0` subtracted by the final centered reduction.
    pub x0_multiple: BigInt,
}

/// Generates a key pair; `instrumented` keeps the sampled `q_i`, `r_i`.
pub fn keygen<R: Rng + ?Sized>(params: &Params, rng: &mut R, instrumented: bool) -> Result<DghvKeyPair> {
    params.validate()?;
    let lo = pow2(params.eta - 1);
    let hi = pow2(params.eta) - 1u32;
    // hi is all ones, so setting the low bit stays in range.
    let p = uniform_inclusive(rng, &lo, &hi) | BigInt::one();

    // q ∈ [0, 2^γ / p): largest admissible value is floor((2^γ - 1) / p).
    let q_max = (pow2(params.gamma) - 1u32) / &p;
    let tau = params.tau as usize;
    let zero = BigInt::zero();
    let mut q: Vec<BigInt> = Vec::with_capacity(tau + 1);
    q.push(BigInt::zero());
    for _ in 0..tau {
        q.push(uniform_inclusive(rng, &zero, &q_max));
    }
    let largest = q[1..].iter().max().cloned().unwrap_or_default();
    // Odd integers in (largest, q_max].
    let odd_lo = (&largest + 1u32) | BigInt::one();
    let odd_hi = if q_max.is_odd() { q_max.clone() } else { &q_max - 1u32 };
    let q0 = if odd_lo <= odd_hi {
        let span = (&odd_hi - &odd_lo) >> 1u32;
        &odd_lo + uniform_inclusive(rng, &zero, &span) * 2u32
    } else {
        for qi in q[1..].iter_mut() {
            while *qi > odd_hi {
                *qi = uniform_inclusive(rng, &zero, &odd_hi);
            }
        }
        odd_hi
    };
    q[0] = q0;

    let r: Vec<BigInt> = (0..=tau).map(|_| uniform_symmetric(rng, params.rho)).collect();

    let x0 = &q[0] * &p + &r[0] * 2u32;
    let mut pk_x = Vec::with_capacity(tau + 1);
    pk_x.push(x0.clone());
    for i in 1..=tau {
        pk_x.push(centered_mod_unchecked(&(&q[i] * &p + &r[i] * 2u32), &x0));
    }

    Ok(DghvKeyPair {
        params: *params,
        sk_p: p,
        pk_x,
        trace: instrumented.then_some(KeyTrace { q, r }),
    })
}

fn check_bit(m: u8) -> Result<()> {
    if m > 1 {
        return Err(Error::Domain(format!("plaintext must be a bit, got {m}")));
    }
    Ok(())
}

/// Encrypts `m` with explicit randomness: `[m + 2r + Σ_{i∈subset} x_i]_{x0}`.
pub fn encrypt_with(pk: PublicKey<'_>, m: u8, r: &BigInt, subset: &[usize]) -> Result<(Ciphertext, EncryptionTrace)> {
    check_bit(m)?;
    let mut sum = BigInt::from(m) + r * 2u32;
    for &i in subset {
        if i == 0 || i > pk.tau() {
            return Err(Error::Domain(format!("subset index {i} outside 1..={}", pk.tau())));
        }
        sum += &pk.x[i];
    }
    let c = centered_mod_unchecked(&sum, pk.x0());
    let x0_multiple = (&sum - &c) / pk.x0();
    let mut subset = subset.to_vec();
    subset.sort_unstable();
    Ok((
        Ciphertext::new(c),
        EncryptionTrace {
            m,
            r: r.clone(),
            subset,
            x0_multiple,
        },
    ))
}

/// Encrypts `m` with a uniformly random subset and noise, returning the trace.
pub fn encrypt_traced<R: Rng + ?Sized>(pk: PublicKey<'_>, m: u8, rng: &mut R) -> Result<(Ciphertext, EncryptionTrace)> {
    check_bit(m)?;
    let subset: Vec<usize> = (1..=pk.tau()).filter(|_| rng.gen::<bool>()).collect();
    let r = uniform_symmetric(rng, pk.params.rho);
    encrypt_with(pk, m, &r, &subset)
}

pub fn encrypt<R: Rng + ?Sized>(pk: PublicKey<'_>, m: u8, rng: &mut R) -> Result<Ciphertext> {
    encrypt_traced(pk, m, rng).map(|(c, _)| c)
}

/// `([c]_p) mod 2`.
pub fn decrypt(sk_p: &BigInt, c: &Ciphertext) -> u8 {
    parity(&centered_mod_unchecked(&c.value, sk_p))
}

pub fn eval_add(c1: &Ciphertext, c2: &Ciphertext, x0: &BigInt) -> Ciphertext {
    Ciphertext::new(centered_mod_unchecked(&(&c1.value + &c2.value), x0))
}

pub fn eval_mul(c1: &Ciphertext, c2: &Ciphertext, x0: &BigInt) -> Ciphertext {
    Ciphertext::new(centered_mod_unchecked(&(&c1.value * &c2.value), x0))
}

/// `[c]_p`: the noise term `2r + m` carried by a ciphertext.
pub fn noise_of(sk_p: &BigInt, c: &Ciphertext) -> BigInt {
    centered_mod_unchecked(&c.value, sk_p)
}

/// Largest even offsets tried per public integer by [`brute_force_agcd`].
///
/// After reduction modulo `x0` each `x_i` carries noise `2(r_i - k·r0)` with
/// `k ∈ {0, 1}`, so `|noise| ≤ 2^{ρ+2}`.
fn agcd_noise_bound(params: &Params) -> BigInt {
    pow2(params.rho + 2)
}

/// Recovers `p` by exhaustive search over the noise of the public integers.
///
/// Tries every even offset pair for `(x0, x1)`, takes the gcd, then refines it
/// against the remaining `x_i` until a single odd η-bit divisor remains.
pub fn brute_force_agcd(pk_x: &[BigInt], params: &Params) -> Result<BigInt> {
    if params.rho > 12 || params.eta > 32 {
        return Err(Error::Intractable(format!(
            "exhaustive AGCD needs rho <= 12 and eta <= 32 (got rho = {}, eta = {})",
            params.rho, params.eta
        )));
    }
    if pk_x.len() < 2 {
        return Err(Error::Domain("need at least two public integers".into()));
    }
    let bound = agcd_noise_bound(params);
    let lo = pow2(params.eta - 1);
    let hi = pow2(params.eta);
    let offsets: Vec<BigInt> = {
        let mut v = Vec::new();
        let mut e = -bound.clone();
        while e <= bound {
            v.push(e.clone());
            e += 2u32;
        }
        v
    };

    for e0 in &offsets {
        let a = &pk_x[0] - e0;
        for e1 in &offsets {
            let mut g = a.gcd(&(&pk_x[1] - e1));
            if g < lo {
                continue;
            }
            let mut consistent = true;
            for xi in &pk_x[2..] {
                // Keep the largest divisor still at least 2^{η-1}.
                let best = offsets
                    .iter()
                    .map(|e| g.gcd(&(xi - e)))
                    .filter(|d| *d >= lo)
                    .max();
                match best {
                    Some(d) => g = d,
                    None => {
                        consistent = false;
                        break;
                    }
                }
            }
            if !consistent {
                continue;
            }
            // Strip small cofactors the first two numbers may share.
            if g >= hi {
                match strip_to_eta_bits(&g, &lo, &hi) {
                    Some(d) => g = d,
                    None => continue,
                }
            }
            if g.is_odd() && g >= lo && g < hi && verifies(pk_x, &g, &bound) {
                return Ok(g);
            }
        }
    }
    Err(Error::NotFound("no odd eta-bit approximate common divisor".into()))
}

fn strip_to_eta_bits(g: &BigInt, lo: &BigInt, hi: &BigInt) -> Option<BigInt> {
    let mut d = BigInt::from(2u32);
    let limit = (g / lo).min(BigInt::from(1u32 << 20));
    while d <= limit {
        if (g % &d).is_zero() {
            let cand = g / &d;
            if cand >= *lo && cand < *hi && cand.is_odd() {
                return Some(cand);
            }
        }
        d += 1u32;
    }
    None
}

fn verifies(pk_x: &[BigInt], p: &BigInt, bound: &BigInt) -> bool {
    pk_x.iter().all(|x| {
        let e = centered_mod_unchecked(x, p);
        e.is_even() && e.abs() <= *bound
    })
}
