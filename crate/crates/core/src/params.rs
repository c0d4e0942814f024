use alloc::format;

use crate::arith::ceil_log2;
use crate::{Error, Result};

/// Security-parameter bundle for the DGHV scheme and the attack on it.
///
/// `Params::from_lambda` uses the standard setting ρ = λ, η = 4λ², γ = λ⁵,
/// τ = γ + λ and attack subset size t = λ³. Individual fields can be
/// overridden with the `with_*` builders and are re-validated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Params {
    pub lambda: u32,
    /// Noise bit-length.
    pub rho: u64,
    /// Secret-key bit-length.
    pub eta: u64,
    /// Public-integer bit-length.
    pub gamma: u64,
    /// Number of public integers besides `x0`.
    pub tau: u64,
    /// Attack subset cardinality `t`.
    pub subset_size: u64,
}

impl Params {
    /// Defaults derived from λ alone, unvalidated.
    pub fn defaults(lambda: u32) -> Self {
        let l = lambda as u64;
        let gamma = l.pow(5);
        Self {
            lambda,
            rho: l,
            eta: 4 * l * l,
            gamma,
            tau: gamma + l,
            subset_size: l.pow(3),
        }
    }

    pub fn from_lambda(lambda: u32) -> Result<Self> {
        let p = Self::defaults(lambda);
        p.validate()?;
        Ok(p)
    }

    pub fn with_rho(self, rho: u64) -> Result<Self> {
        Self { rho, ..self }.validated()
    }

    pub fn with_eta(self, eta: u64) -> Result<Self> {
        Self { eta, ..self }.validated()
    }

    /// Overrides γ. τ is left untouched; call [`Params::with_tau`] too if the
    /// default τ = γ + λ relation should follow.
    pub fn with_gamma(self, gamma: u64) -> Result<Self> {
        Self { gamma, ..self }.validated()
    }

    pub fn with_tau(self, tau: u64) -> Result<Self> {
        Self { tau, ..self }.validated()
    }

    pub fn with_subset_size(self, subset_size: u64) -> Result<Self> {
        Self {
            subset_size,
            ..self
        }
        .validated()
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda == 0 {
            return Err(Error::InvalidParams("lambda must be positive".into()));
        }
        if self.rho < 1 {
            return Err(Error::InvalidParams("rho must be at least 1".into()));
        }
        if self.tau < 1 {
            return Err(Error::InvalidParams("tau must be at least 1".into()));
        }
        let margin = self.rho + 3 + ceil_log2(self.tau);
        if self.eta <= margin {
            return Err(Error::InvalidParams(format!(
                "eta = {} leaves no decryption margin (needs > rho + 3 + ceil(log2 tau) = {margin})",
                self.eta
            )));
        }
        if self.gamma <= self.eta {
            return Err(Error::InvalidParams(format!(
                "gamma = {} must exceed eta = {}",
                self.gamma, self.eta
            )));
        }
        if self.subset_size < 1 {
            return Err(Error::InvalidParams("subset_size must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_setting() {
        let p = Params::from_lambda(3).unwrap();
        assert_eq!((p.rho, p.eta, p.gamma, p.tau, p.subset_size), (3, 36, 243, 246, 27));
    }

    #[test]
    fn overrides_revalidate() {
        let p = Params::from_lambda(3).unwrap();
        assert_eq!(p.with_eta(27).unwrap().eta, 27);
        assert!(p.with_eta(10).is_err());
        assert!(p.with_gamma(20).is_err());
        assert!(p.with_tau(0).is_err());
        assert_eq!(p.with_gamma(729).unwrap().tau, 246);
    }

    #[test]
    fn lambda_one_is_rejected() {
        assert!(Params::from_lambda(1).is_err());
        assert!(Params::from_lambda(2).is_ok());
    }
}
