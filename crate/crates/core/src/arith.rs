//! Big-integer helpers shared by the schemes and the lattice code.

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::{Error, Result};

/// Centered residue of `c` modulo `modulus`, in `(-modulus/2, modulus/2]`.
pub fn centered_mod(c: &BigInt, modulus: &BigInt) -> Result<BigInt> {
    if !modulus.is_positive() {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    Ok(centered_mod_unchecked(c, modulus))
}

pub(crate) fn centered_mod_unchecked(c: &BigInt, modulus: &BigInt) -> BigInt {
    let r = c.mod_floor(modulus);
    // r in [0, modulus); map the upper half down. 2r > modulus <=> r > modulus/2.
    if (&r << 1u32) > *modulus {
        r - modulus
    } else {
        r
    }
}

/// Parity of `z` in `{0, 1}`; negative values use the parity of `|z|`.
pub fn parity(z: &BigInt) -> u8 {
    if z.is_odd() {
        1
    } else {
        0
    }
}

/// `round(num / den)` with ties rounded away from zero. `den` must be positive.
pub fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    debug_assert!(den.is_positive());
    let twice = num.abs() * 2u32 + den;
    let q = twice.div_floor(&(den * 2u32));
    if num.is_negative() {
        -q
    } else {
        q
    }
}

/// Uniform integer in the closed interval `[lo, hi]`.
pub fn uniform_inclusive<R: Rng + ?Sized>(rng: &mut R, lo: &BigInt, hi: &BigInt) -> BigInt {
    debug_assert!(lo <= hi);
    rng.gen_bigint_range(lo, &(hi + 1u32))
}

/// Uniform integer in `[-2^bits, 2^bits]`.
pub fn uniform_symmetric<R: Rng + ?Sized>(rng: &mut R, bits: u64) -> BigInt {
    let bound = BigInt::one() << bits;
    uniform_inclusive(rng, &-&bound, &bound)
}

/// `2^exp` as a [`BigInt`].
pub fn pow2(exp: u64) -> BigInt {
    BigInt::one() << exp
}

/// Number of significant bits of `|z|` (0 for zero).
pub fn bit_len(z: &BigInt) -> u64 {
    z.bits()
}

/// `ceil(log2(n))` for `n >= 1`.
pub fn ceil_log2(n: u64) -> u64 {
    debug_assert!(n >= 1);
    64 - (n - 1).leading_zeros() as u64
}

/// Infinity norm of an integer vector.
pub fn inf_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
}

/// Squared Euclidean norm.
pub fn norm_sq(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x * x).sum()
}

/// Inner product of equal-length vectors.
pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Integer square root of a non-negative value, if it is a perfect square.
pub fn exact_sqrt(z: &BigInt) -> Option<BigInt> {
    if z.is_negative() {
        return None;
    }
    let r = z.sqrt();
    (&r * &r == *z).then_some(r)
}

/// Modular exponentiation on non-negative residues.
pub(crate) fn mod_pow(base: &BigUint, exp: &BigUint, modulus: &BigUint) -> BigUint {
    base.modpow(exp, modulus)
}

const SMALL_PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller–Rabin with the first twelve prime bases.
///
/// Deterministic below 3.3e24; a strong probable-prime test above that.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    let n = n.magnitude();
    for &p in &SMALL_PRIMES {
        if *n == BigUint::from(p) {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }
    if *n < BigUint::from(2u32) {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &SMALL_PRIMES {
        let mut x = mod_pow(&BigUint::from(a), &d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn centered_mod_small_cases() {
        assert_eq!(centered_mod(&bi(7), &bi(5)).unwrap(), bi(2));
        assert_eq!(centered_mod(&bi(13), &bi(5)).unwrap(), bi(-2));
        assert_eq!(centered_mod(&bi(-7), &bi(5)).unwrap(), bi(-2));
        // even modulus: high endpoint included
        assert_eq!(centered_mod(&bi(3), &bi(6)).unwrap(), bi(3));
        assert_eq!(centered_mod(&bi(-3), &bi(6)).unwrap(), bi(3));
        assert_eq!(centered_mod(&bi(5), &bi(1)).unwrap(), bi(0));
    }

    #[test]
    fn centered_mod_rejects_non_positive_modulus() {
        assert!(matches!(centered_mod(&bi(3), &bi(0)), Err(Error::Domain(_))));
        assert!(matches!(centered_mod(&bi(3), &bi(-5)), Err(Error::Domain(_))));
    }

    #[test]
    fn round_div_ties_away_from_zero() {
        assert_eq!(round_div(&bi(5), &bi(2)), bi(3));
        assert_eq!(round_div(&bi(-5), &bi(2)), bi(-3));
        assert_eq!(round_div(&bi(7), &bi(3)), bi(2));
        assert_eq!(round_div(&bi(-7), &bi(3)), bi(-2));
        assert_eq!(round_div(&bi(0), &bi(3)), bi(0));
    }

    #[test]
    fn parity_of_negatives() {
        assert_eq!(parity(&bi(-3)), 1);
        assert_eq!(parity(&bi(-4)), 0);
        assert_eq!(parity(&bi(0)), 0);
    }

    #[test]
    fn primes() {
        let primes: alloc::vec::Vec<i64> = (0..60).filter(|&n| is_probable_prime(&bi(n))).collect();
        assert_eq!(
            primes,
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        // Carmichael numbers
        assert!(!is_probable_prime(&bi(561)));
        assert!(!is_probable_prime(&bi(41041)));
        assert!(is_probable_prime(&bi(2_147_483_647)));
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(246), 8);
        assert_eq!(ceil_log2(256), 8);
        assert_eq!(ceil_log2(257), 9);
    }

    #[test]
    fn exact_sqrt_detects_squares() {
        assert_eq!(exact_sqrt(&bi(36)), Some(bi(6)));
        assert_eq!(exact_sqrt(&bi(35)), None);
        assert_eq!(exact_sqrt(&bi(-4)), None);
    }
}
