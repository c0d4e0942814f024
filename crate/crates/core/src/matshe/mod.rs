//! Somewhat-homomorphic encryption with a 2×2 matrix secret key.
//!
//! The secret is an integer matrix `T` with odd determinant `p`; its
//! adjugate `A` satisfies `A·T = p·I`. Public matrices are
//! `B_i = [R_i·A + 2r_i·I]` for uniform `R_i`, so `B_i·T ≡ 2r_i·T (mod p)`.
//! A ciphertext `C = [Σ k_i B_i + (m + 2r)·I]` then satisfies
//! `C·T ≡ s·T (mod p)` with the noise scalar `s = 2(Σ k_i r_i + r) + m`.
//!
//! In the Gaussian-integer variant `p = a² + b²` is a prime,
//! `T = [[a, b], [-b, a]]`, and everything public is reduced modulo
//! `n = p·q` instead of `p`.

mod mat2;
mod squares;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::arith::{parity, pow2, uniform_inclusive, uniform_symmetric};
use crate::{Error, Result};

pub use mat2::Mat2;
pub use squares::{random_prime, sum_of_two_squares};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatSheVariant {
    RandomT,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatSheConfig {
    pub lambda: u32,
    pub variant: MatSheVariant,
    /// Number of public matrices `τ'`.
    pub num_public: usize,
    /// Bit size of the entries of `T` (random-T) or of the primes (Gaussian).
    pub key_bits: u64,
}

impl MatSheConfig {
    /// `τ' = ceil(λ·log₂ λ)`. Key sizes start at `λ²` bits and grow until a
    /// fresh ciphertext of worst-case noise still decrypts.
    pub fn new(lambda: u32, variant: MatSheVariant) -> Result<Self> {
        if lambda < 2 {
            return Err(Error::InvalidParams("matrix scheme needs lambda >= 2".into()));
        }
        let l = lambda as f64;
        let num_public = libm::ceil(l * libm::log2(l)) as usize;
        let noise_bits = fresh_noise_bound(lambda, num_public).bits();
        let l2 = (lambda as u64).pow(2);
        let key_bits = match variant {
            // det ≈ 2^{2·bits} must exceed 2·‖T‖∞·s ≈ 2^{bits + noise + 1}
            MatSheVariant::RandomT => l2.max(noise_bits + 3),
            // ‖T‖∞ ≈ √p, so p needs about twice the noise bits
            MatSheVariant::Gaussian => l2.max(2 * noise_bits + 4),
        };
        Ok(Self {
            lambda,
            variant,
            num_public,
            key_bits,
        })
    }
}

/// Worst-case noise scalar of a fresh ciphertext:
/// `2^{2λ+1}·τ' + 2^{λ+1} + 1`.
pub fn fresh_noise_bound(lambda: u32, num_public: usize) -> BigInt {
    let l = lambda as u64;
    pow2(2 * l + 1) * num_public + pow2(l + 1) + 1u32
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatSheKeyPair {
    pub config: MatSheConfig,
    /// Secret matrix.
    pub t: Mat2,
    /// `A` with `A·T = T·A = secret_modulus·I`.
    pub a: Mat2,
    /// `det(T)`: `p` in both variants.
    pub secret_modulus: BigInt,
    /// Public modulus: `p` (random-T) or `n = p·q` (Gaussian).
    pub modulus: BigInt,
    pub public_b: Vec<Mat2>,
    /// `r_i` behind each `B_i`, when instrumented.
    pub noise: Option<Vec<BigInt>>,
}

impl MatSheKeyPair {
    pub fn public_key(&self) -> MatPublicKey<'_> {
        MatPublicKey {
            lambda: self.config.lambda,
            modulus: &self.modulus,
            b: &self.public_b,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MatPublicKey<'a> {
    pub lambda: u32,
    pub modulus: &'a BigInt,
    pub b: &'a [Mat2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatCiphertext(pub Mat2);

pub fn mat_keygen<R: Rng + ?Sized>(config: &MatSheConfig, rng: &mut R, instrumented: bool) -> Result<MatSheKeyPair> {
    if config.lambda < 2 {
        return Err(Error::InvalidParams("matrix scheme needs lambda >= 2".into()));
    }
    let s_max = fresh_noise_bound(config.lambda, config.num_public);
    let (t, p, modulus) = match config.variant {
        MatSheVariant::RandomT => {
            let t = loop {
                let bound = pow2(config.key_bits);
                let mut sample = || uniform_inclusive(rng, &-&bound, &bound);
                let mut t = Mat2::new(sample(), sample(), sample(), sample());
                if t.det().is_negative() {
                    t = t.swap_rows();
                }
                let det = t.det();
                let budget = t.inf_norm() * &s_max * 2u32;
                if det.is_odd() && t.get(0, 0).is_odd() && det > budget {
                    break t;
                }
            };
            let p = t.det();
            (t, p.clone(), p)
        }
        MatSheVariant::Gaussian => {
            let (p, a, b) = loop {
                let p = random_prime(rng, config.key_bits, true);
                let (a, b) = sum_of_two_squares(&p)?;
                if p > a.clone().max(b.clone()) * &s_max * 2u32 {
                    break (p, a, b);
                }
            };
            let q = loop {
                let q = random_prime(rng, config.key_bits, false);
                if q != p {
                    break q;
                }
            };
            let t = Mat2::new(a.clone(), b.clone(), -&b, a);
            let n = &p * &q;
            (t, p, n)
        }
    };
    let a = t.adjugate();
    debug_assert_eq!(&a * &t, Mat2::scalar(p.clone()));

    let zero = BigInt::zero();
    let top = &modulus - 1u32;
    let mut public_b = Vec::with_capacity(config.num_public);
    let mut noise = Vec::with_capacity(config.num_public);
    for _ in 0..config.num_public {
        let mut entry = || uniform_inclusive(rng, &zero, &top);
        let r_mat = Mat2::new(entry(), entry(), entry(), entry());
        let r = uniform_symmetric(rng, config.lambda as u64);
        let b = (&(&r_mat * &a) + &Mat2::scalar(&r * 2u32)).centered(&modulus);
        public_b.push(b);
        noise.push(r);
    }
    Ok(MatSheKeyPair {
        config: *config,
        t,
        a,
        secret_modulus: p,
        modulus,
        public_b,
        noise: instrumented.then_some(noise),
    })
}

/// `C = [Σ k_i B_i + (m + 2r)·I]` with explicit `k_i`, `r`.
pub fn mat_encrypt_with(pk: MatPublicKey<'_>, m: u8, ks: &[BigInt], r: &BigInt) -> Result<MatCiphertext> {
    if m > 1 {
        return Err(Error::Domain(alloc::format!("plaintext must be a bit, got {m}")));
    }
    if ks.len() != pk.b.len() {
        return Err(Error::Dimension(alloc::format!(
            "{} coefficients for {} public matrices",
            ks.len(),
            pk.b.len()
        )));
    }
    let mut acc = Mat2::scalar(BigInt::from(m) + r * 2u32);
    for (k, b) in ks.iter().zip(pk.b) {
        acc = &acc + &b.scale(k);
    }
    Ok(MatCiphertext(acc.centered(pk.modulus)))
}

/// Encrypts with `|k_i|, |r| ≤ 2^λ`.
pub fn mat_encrypt<R: Rng + ?Sized>(pk: MatPublicKey<'_>, m: u8, rng: &mut R) -> Result<MatCiphertext> {
    let bits = pk.lambda as u64;
    let ks: Vec<BigInt> = (0..pk.b.len()).map(|_| uniform_symmetric(rng, bits)).collect();
    let r = uniform_symmetric(rng, bits);
    mat_encrypt_with(pk, m, &ks, &r)
}

pub fn mat_add(c1: &MatCiphertext, c2: &MatCiphertext, modulus: &BigInt) -> MatCiphertext {
    MatCiphertext((&c1.0 + &c2.0).centered(modulus))
}

pub fn mat_mul(c1: &MatCiphertext, c2: &MatCiphertext, modulus: &BigInt) -> MatCiphertext {
    MatCiphertext((&c1.0 * &c2.0).centered(modulus))
}

/// `[C·T]_p`; for ciphertexts within budget this is exactly `s·T`.
fn decrypt_matrix(sk: &MatSheKeyPair, c: &MatCiphertext) -> Mat2 {
    (&c.0 * &sk.t).centered(&sk.secret_modulus)
}

/// Parity of the top-left entry of `[C·T]_p`.
pub fn mat_decrypt(sk: &MatSheKeyPair, c: &MatCiphertext) -> u8 {
    parity(decrypt_matrix(sk, c).get(0, 0))
}

/// The noise scalar `s` with `[C·T]_p = s·T`, or
/// [`Error::BudgetExceeded`] when no such scalar exists.
pub fn mat_noise_of(sk: &MatSheKeyPair, c: &MatCiphertext) -> Result<BigInt> {
    let m = decrypt_matrix(sk, c);
    let (s, rem) = m.get(0, 0).div_rem(sk.t.get(0, 0));
    if !rem.is_zero() || sk.t.scale(&s) != m {
        return Err(Error::BudgetExceeded);
    }
    Ok(s)
}

/// `|s|·‖T‖∞ < p/2`: the condition under which [`mat_decrypt`] is correct for
/// a ciphertext with noise scalar `s`.
pub fn within_budget(sk: &MatSheKeyPair, s: &BigInt) -> bool {
    s.abs() * sk.t.inf_norm() * 2u32 < sk.secret_modulus
}

#[cfg(test)]
mod tests;
