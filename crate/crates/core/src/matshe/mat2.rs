use core::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::centered_mod_unchecked;

/// 2×2 integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Mat2(pub [[BigInt; 2]; 2]);

impl Mat2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Self([[a, b], [c, d]])
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::scalar(BigInt::one())
    }

    pub fn scalar(s: BigInt) -> Self {
        Self::new(s.clone(), BigInt::zero(), BigInt::zero(), s)
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.0[i][j]
    }

    pub fn det(&self) -> BigInt {
        let [[a, b], [c, d]] = &self.0;
        a * d - b * c
    }

    /// The matrix `A` with `A·T = T·A = det(T)·I`.
    pub fn adjugate(&self) -> Self {
        let [[a, b], [c, d]] = &self.0;
        Self::new(d.clone(), -b, -c, a.clone())
    }

    pub fn swap_rows(&self) -> Self {
        let [r0, r1] = self.0.clone();
        Self([r1, r0])
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        self.map(|x| x * s)
    }

    pub fn inf_norm(&self) -> BigInt {
        self.0.iter().flatten().map(|x| x.abs()).max().unwrap_or_default()
    }

    /// Entry-wise centered residues modulo `modulus`.
    pub fn centered(&self, modulus: &BigInt) -> Self {
        self.map(|x| centered_mod_unchecked(x, modulus))
    }

    fn map(&self, f: impl Fn(&BigInt) -> BigInt) -> Self {
        let [[a, b], [c, d]] = &self.0;
        Self::new(f(a), f(b), f(c), f(d))
    }

    pub fn row_major(&self) -> [&BigInt; 4] {
        let [[a, b], [c, d]] = &self.0;
        [a, b, c, d]
    }
}

impl Add for &Mat2 {
    type Output = Mat2;

    fn add(self, rhs: &Mat2) -> Mat2 {
        let mut out = self.clone();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += &rhs.0[i][j];
            }
        }
        out
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: &Mat2) -> Mat2 {
        let e = |i: usize, j: usize| &self.0[i][0] * &rhs.0[0][j] + &self.0[i][1] * &rhs.0[1][j];
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}
