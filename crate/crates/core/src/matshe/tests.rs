use super::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bi(v: i64) -> BigInt {
    BigInt::from(v)
}

fn key(lambda: u32, variant: MatSheVariant, seed: u64) -> MatSheKeyPair {
    let cfg = MatSheConfig::new(lambda, variant).unwrap();
    mat_keygen(&cfg, &mut ChaCha8Rng::seed_from_u64(seed), true).unwrap()
}

#[test]
fn toy_adjugate() {
    let t = Mat2::from_i64(3, 1, 1, 2);
    assert_eq!(t.det(), bi(5));
    let a = t.adjugate();
    assert_eq!(a, Mat2::from_i64(2, -1, -1, 3));
    assert_eq!(&a * &t, Mat2::scalar(bi(5)));
    assert_eq!(&t * &a, Mat2::scalar(bi(5)));
}

#[test]
fn toy_gaussian_key() {
    let (a, b) = sum_of_two_squares(&bi(13)).unwrap();
    assert_eq!((a.clone(), b.clone()), (bi(3), bi(2)));
    let t = Mat2::new(a.clone(), b.clone(), -&b, a.clone());
    let adj = Mat2::new(a.clone(), -&b, b, a);
    assert_eq!(&t * &adj, Mat2::scalar(bi(13)));
    assert_eq!(t.adjugate(), adj);
}

#[test]
fn config_defaults() {
    let c = MatSheConfig::new(4, MatSheVariant::RandomT).unwrap();
    assert_eq!(c.num_public, 8);
    assert_eq!(c.key_bits, 16);
    let c = MatSheConfig::new(3, MatSheVariant::RandomT).unwrap();
    assert_eq!(c.num_public, 5);
    assert!(c.key_bits > 9);
    assert!(MatSheConfig::new(1, MatSheVariant::Gaussian).is_err());
}

#[test]
fn key_invariants() {
    for variant in [MatSheVariant::RandomT, MatSheVariant::Gaussian] {
        for seed in 0..5 {
            let kp = key(3, variant, seed);
            let p = &kp.secret_modulus;
            assert_eq!(&kp.a * &kp.t, Mat2::scalar(p.clone()));
            assert_eq!(&kp.t * &kp.a, Mat2::scalar(p.clone()));
            assert_eq!(kp.t.det(), *p);
            assert!(kp.modulus.is_odd() && p.is_odd() && kp.t.get(0, 0).is_odd());
            let noise = kp.noise.as_ref().unwrap();
            for (b, r) in kp.public_b.iter().zip(noise) {
                assert!(r.abs() <= pow2(3));
                let lhs = (b * &kp.t).centered(p);
                let rhs = kp.t.scale(&(r * 2)).centered(p);
                assert_eq!(lhs, rhs);
            }
            if variant == MatSheVariant::Gaussian {
                let (a, b) = (kp.t.get(0, 0), kp.t.get(0, 1));
                assert_eq!(a * a + b * b, *p);
                assert!(crate::arith::is_probable_prime(p));
                assert_eq!(&kp.modulus % p, BigInt::zero());
            } else {
                assert_eq!(&kp.modulus, p);
            }
        }
    }
}

#[test]
fn left_multiplied_system_does_not_hold() {
    let kp = key(4, MatSheVariant::RandomT, 1);
    let p = &kp.secret_modulus;
    let noise = kp.noise.as_ref().unwrap();
    let mismatches = kp
        .public_b
        .iter()
        .zip(noise)
        .filter(|(b, r)| (&kp.t * b).centered(p) != kp.t.scale(&(*r * 2)).centered(p))
        .count();
    assert!(mismatches > 0);
}

#[test]
fn trivial_ciphertexts() {
    let kp = key(4, MatSheVariant::RandomT, 2);
    let zeros = alloc::vec![BigInt::zero(); kp.public_b.len()];
    let c0 = mat_encrypt_with(kp.public_key(), 0, &zeros, &BigInt::zero()).unwrap();
    let c1 = mat_encrypt_with(kp.public_key(), 1, &zeros, &BigInt::zero()).unwrap();
    assert_eq!(c0.0, Mat2::zero());
    assert_eq!(c1.0, Mat2::identity());
    assert_eq!(mat_decrypt(&kp, &c0), 0);
    assert_eq!(mat_decrypt(&kp, &c1), 1);
    assert_eq!(mat_noise_of(&kp, &c1).unwrap(), bi(1));
    assert_eq!(mat_noise_of(&kp, &mat_add(&c1, &c1, &kp.modulus)).unwrap(), bi(2));
    assert!(mat_encrypt_with(kp.public_key(), 2, &zeros, &BigInt::zero()).is_err());
    assert!(mat_encrypt_with(kp.public_key(), 0, &zeros[1..], &BigInt::zero()).is_err());
}

#[test]
fn add_mul_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let kp = key(4, MatSheVariant::RandomT, 3);
    let n = &kp.modulus;
    for _ in 0..50 {
        let (m1, m2) = (rng.gen_range(0..2u8), rng.gen_range(0..2u8));
        let c1 = mat_encrypt(kp.public_key(), m1, &mut rng).unwrap();
        let c2 = mat_encrypt(kp.public_key(), m2, &mut rng).unwrap();
        assert_eq!(mat_add(&c1, &MatCiphertext(Mat2::zero()), n), c1);
        assert_eq!(mat_mul(&c1, &MatCiphertext(Mat2::identity()), n), c1);
        let s1 = mat_noise_of(&kp, &c1).unwrap();
        let s2 = mat_noise_of(&kp, &c2).unwrap();
        assert_eq!(parity(&s1), m1);
        assert_eq!(mat_noise_of(&kp, &mat_add(&c1, &c2, n)).unwrap(), &s1 + &s2);
        let prod = &s1 * &s2;
        if within_budget(&kp, &prod) {
            let cm = mat_mul(&c1, &c2, n);
            assert_eq!(mat_noise_of(&kp, &cm).unwrap(), prod);
            assert_eq!(mat_decrypt(&kp, &cm), m1 * m2);
        }
    }
}

#[test]
fn budget_violation_is_reported() {
    let kp = key(3, MatSheVariant::RandomT, 4);
    // s·T with |s|·‖T‖∞ far above p/2 wraps modulo p
    let s = &kp.secret_modulus / 2 + 1;
    let c = MatCiphertext(Mat2::scalar(s).centered(&kp.modulus));
    assert_eq!(mat_noise_of(&kp, &c), Err(Error::BudgetExceeded));
}

#[test]
fn gaussian_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let kp = key(3, MatSheVariant::Gaussian, 5);
    for _ in 0..100 {
        let m = rng.gen_range(0..2u8);
        let c = mat_encrypt(kp.public_key(), m, &mut rng).unwrap();
        assert_eq!(mat_decrypt(&kp, &c), m);
    }
}
