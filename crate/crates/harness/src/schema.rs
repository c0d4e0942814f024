//! Serialized records. Big integers are written as decimal strings and read
//! back as decimal or `0x`-prefixed lowercase hex.

use fhe_lattice::attack::{AttackVerdict, Witness};
use fhe_lattice::dghv::{Ciphertext, DghvKeyPair};
use fhe_lattice::matshe::{Mat2, MatCiphertext, MatSheConfig, MatSheKeyPair, MatSheVariant};
use fhe_lattice::Params;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::formats::{parse_all, parse_bigint, to_strings, FormatError};
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub lambda: u32,
    pub rho: u64,
    pub eta: u64,
    pub gamma: u64,
    pub tau: u64,
    pub subset_size: u64,
}

impl From<Params> for ParamsRecord {
    fn from(p: Params) -> Self {
        Self {
            lambda: p.lambda,
            rho: p.rho,
            eta: p.eta,
            gamma: p.gamma,
            tau: p.tau,
            subset_size: p.subset_size,
        }
    }
}

impl ParamsRecord {
    pub fn to_params(self) -> fhe_lattice::Result<Params> {
        let p = Params {
            lambda: self.lambda,
            rho: self.rho,
            eta: self.eta,
            gamma: self.gamma,
            tau: self.tau,
            subset_size: self.subset_size,
        };
        p.validate()?;
        Ok(p)
    }
}

/// A DGHV public key, optionally with the secret `p` of an instrumented run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub schema_version: u32,
    pub params: ParamsRecord,
    pub x: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    pub seed: u64,
}

impl InstanceRecord {
    pub fn new(kp: &DghvKeyPair, seed: u64, include_secret: bool) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            params: kp.params.into(),
            x: to_strings(&kp.pk_x),
            p: include_secret.then(|| kp.sk_p.to_string()),
            seed,
        }
    }

    pub fn params(&self) -> anyhow::Result<Params> {
        Ok(self.params.to_params()?)
    }

    pub fn public_x(&self) -> Result<Vec<BigInt>, FormatError> {
        parse_all(&self.x)
    }

    pub fn secret_p(&self) -> Result<Option<BigInt>, FormatError> {
        self.p.as_deref().map(parse_bigint).transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiphertextRecord {
    pub schema_version: u32,
    pub c: String,
}

impl CiphertextRecord {
    pub fn new(c: &Ciphertext) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            c: c.value.to_string(),
        }
    }

    pub fn ciphertext(&self) -> Result<Ciphertext, FormatError> {
        Ok(Ciphertext::new(parse_bigint(&self.c)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    /// Index of the accepted row in the reduced basis.
    pub row: usize,
    pub b0: String,
    pub y: String,
    pub coefficients: Vec<String>,
}

impl From<&Witness> for WitnessRecord {
    fn from(w: &Witness) -> Self {
        Self {
            row: w.row,
            b0: w.b0.to_string(),
            y: w.y().to_string(),
            coefficients: to_strings(&w.coefficients),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub schema_version: u32,
    pub decision: Option<u8>,
    pub method: Option<String>,
    pub threshold: String,
    pub subset: Vec<usize>,
    pub witness: Option<WitnessRecord>,
    pub rows_scanned: usize,
    pub retries: usize,
    pub swaps: u64,
    pub timings_ms: f64,
}

impl VerdictRecord {
    pub fn new(v: &AttackVerdict, timings_ms: f64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            decision: v.decision,
            method: v.method.map(|m| m.as_str().to_string()),
            threshold: v.threshold.to_string(),
            subset: v.subset_used.clone(),
            witness: v.witness.as_ref().map(WitnessRecord::from),
            rows_scanned: v.rows_scanned,
            retries: v.subsets_tried,
            swaps: v.swaps,
            timings_ms,
        }
    }
}

pub fn variant_tag(v: MatSheVariant) -> &'static str {
    match v {
        MatSheVariant::RandomT => "random-t",
        MatSheVariant::Gaussian => "gaussian",
    }
}

pub fn parse_variant(tag: &str) -> Result<MatSheVariant, FormatError> {
    match tag {
        "random-t" => Ok(MatSheVariant::RandomT),
        "gaussian" => Ok(MatSheVariant::Gaussian),
        other => Err(FormatError::Integer(format!("unknown variant {other}"))),
    }
}

fn mat_to_strings(m: &Mat2) -> [String; 4] {
    m.row_major().map(BigInt::to_string)
}

fn mat_from_strings(s: &[String; 4]) -> Result<Mat2, FormatError> {
    Ok(Mat2::new(
        parse_bigint(&s[0])?,
        parse_bigint(&s[1])?,
        parse_bigint(&s[2])?,
        parse_bigint(&s[3])?,
    ))
}

/// Secret half of a matrix-scheme key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatSecretRecord {
    pub t: [String; 4],
    pub a: [String; 4],
    pub secret_modulus: String,
}

/// Matrices are stored row-major as `[m11, m12, m21, m22]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatKeyRecord {
    pub schema_version: u32,
    pub variant: String,
    pub lambda: u32,
    pub key_bits: u64,
    pub modulus: String,
    pub public_b: Vec<[String; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secret: Option<MatSecretRecord>,
    pub seed: u64,
}

impl MatKeyRecord {
    pub fn new(kp: &MatSheKeyPair, seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            variant: variant_tag(kp.config.variant).to_string(),
            lambda: kp.config.lambda,
            key_bits: kp.config.key_bits,
            modulus: kp.modulus.to_string(),
            public_b: kp.public_b.iter().map(mat_to_strings).collect(),
            secret: Some(MatSecretRecord {
                t: mat_to_strings(&kp.t),
                a: mat_to_strings(&kp.a),
                secret_modulus: kp.secret_modulus.to_string(),
            }),
            seed,
        }
    }

    pub fn modulus(&self) -> Result<BigInt, FormatError> {
        parse_bigint(&self.modulus)
    }

    pub fn public_b(&self) -> Result<Vec<Mat2>, FormatError> {
        self.public_b.iter().map(mat_from_strings).collect()
    }

    /// Rebuilds the key pair; `None` if the record carries no secret.
    pub fn key_pair(&self) -> anyhow::Result<Option<MatSheKeyPair>> {
        let Some(secret) = &self.secret else {
            return Ok(None);
        };
        let variant = parse_variant(&self.variant)?;
        let mut config = MatSheConfig::new(self.lambda, variant)?;
        config.key_bits = self.key_bits;
        let public_b = self.public_b()?;
        config.num_public = public_b.len();
        Ok(Some(MatSheKeyPair {
            config,
            t: mat_from_strings(&secret.t)?,
            a: mat_from_strings(&secret.a)?,
            secret_modulus: parse_bigint(&secret.secret_modulus)?,
            modulus: self.modulus()?,
            public_b,
            noise: None,
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatCiphertextRecord {
    pub schema_version: u32,
    pub variant: String,
    pub modulus: String,
    pub c: [String; 4],
}

impl MatCiphertextRecord {
    pub fn new(c: &MatCiphertext, variant: MatSheVariant, modulus: &BigInt) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            variant: variant_tag(variant).to_string(),
            modulus: modulus.to_string(),
            c: mat_to_strings(&c.0),
        }
    }

    pub fn ciphertext(&self) -> Result<MatCiphertext, FormatError> {
        Ok(MatCiphertext(mat_from_strings(&self.c)?))
    }
}
