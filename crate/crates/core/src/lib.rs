//! Cryptanalysis workbench for fully homomorphic encryption over the integers.
//!
//! The crate is `no_std` (with `alloc`) and contains only the algorithmic
//! pieces:
//!
//! * [`dghv`]: the DGHV somewhat-homomorphic scheme, with instrumented key
//!   generation and a naive approximate-GCD oracle for tests.
//! * [`lattice`]: exact integer LLL reduction with unimodular transform
//!   tracking, exact Gram–Schmidt data, a small-dimension enumeration oracle
//!   and the reduction-quality bound formulas.
//! * [`attack`]: the plaintext-recovery lattice attack on DGHV ciphertexts
//!   together with its feasibility estimator.
//! * [`matshe`]: the 2×2 matrix-key somewhat-homomorphic scheme and its
//!   Gaussian-integer variant.
//!
//! IO, serialization and the command line live in the companion
//! `fhe-lattice-harness` crate.

#![no_std]

extern crate alloc;

pub mod arith;
pub mod attack;
pub mod dghv;
mod error;
pub mod lattice;
pub mod matshe;
mod params;

pub use error::{Error, Result};
pub use params::Params;
