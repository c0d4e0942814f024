use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use rand::Rng;

use crate::arith::{exact_sqrt, is_probable_prime, pow2, uniform_inclusive};
use crate::{Error, Result};

/// Writes a prime `p ≡ 1 (mod 4)` as `a² + b²` with `a` odd and both positive
/// (Cornacchia's algorithm).
pub fn sum_of_two_squares(p: &BigInt) -> Result<(BigInt, BigInt)> {
    let four = BigInt::from(4);
    if p.mod_floor(&four) != BigInt::one() || !is_probable_prime(p) {
        return Err(Error::Domain(alloc::format!("{p} is not a prime congruent to 1 mod 4")));
    }
    // x with x² ≡ -1 (mod p), from any quadratic non-residue.
    let p_minus_1 = p - 1u32;
    let half = &p_minus_1 >> 1u32;
    let quarter = &p_minus_1 >> 2u32;
    let mut c = BigInt::from(2);
    let root = loop {
        if c.modpow(&half, p) == p_minus_1 {
            break c.modpow(&quarter, p);
        }
        c += 1u32;
    };

    let (mut a, mut b) = (p.clone(), root);
    while &b * &b > *p {
        let r = a.mod_floor(&b);
        a = b;
        b = r;
    }
    let other = exact_sqrt(&(p - &b * &b)).expect("Cornacchia yields a representation for p = 1 mod 4");
    let (x, y) = (b.abs(), other);
    Ok(if x.is_odd() { (x, y) } else { (y, x) })
}

/// Random prime with exactly `bits` bits; with `one_mod_four` also `p ≡ 1 (mod 4)`.
pub fn random_prime<R: Rng + ?Sized>(rng: &mut R, bits: u64, one_mod_four: bool) -> BigInt {
    assert!(bits >= 3, "no {bits}-bit primes of the requested form");
    let lo = pow2(bits - 1);
    let hi = pow2(bits) - 1u32;
    loop {
        let mut cand = uniform_inclusive(rng, &lo, &hi) | BigInt::one();
        if one_mod_four {
            // clear bit 1 so cand = 1 mod 4; stays in range because bits >= 3
            cand &= !BigInt::from(2);
        }
        if is_probable_prime(&cand) {
            return cand;
        }
    }
}
