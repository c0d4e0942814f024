//! Experiment harness for the `fhe-lattice` workbench: instance generation,
//! attack campaigns, γ sweeps, the toy reproduction transcript, self-tests,
//! and the JSON/CSV/text formats used by the `fhe-lattice` binary.

pub mod experiment;
pub mod formats;
pub mod schema;
pub mod seeds;
pub mod selftest;
pub mod toy;

pub use experiment::{run_attack_campaign, run_estimate, run_gamma_sweep, ExperimentReport, ExperimentSpec, SweepReport};
pub use selftest::{run_scheme_selftest, Scheme, SelftestReport};
pub use toy::{run_toy_repro, ToyOptions, ToyTranscript};

/// Version of every JSON record written by the harness.
pub const SCHEMA_VERSION: u32 = 1;

pub const LIBRARY_VERSION: &str = env!("CARGO_PKG_VERSION");
