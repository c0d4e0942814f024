use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, ensure, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fhe_lattice::attack::{attack, AttackConfig, LatticeVariant, ThresholdMode};
use fhe_lattice::dghv::{decrypt, encrypt, keygen};
use fhe_lattice::lattice::Delta;
use fhe_lattice::matshe::{mat_add, mat_decrypt, mat_encrypt, mat_keygen, mat_mul, MatSheConfig, MatSheVariant};
use fhe_lattice::Params;
use fhe_lattice_harness::experiment::{campaign_csv, sweep_csv};
use fhe_lattice_harness::formats::parse_bigint;
use fhe_lattice_harness::schema::{
    parse_variant, CiphertextRecord, InstanceRecord, MatCiphertextRecord, MatKeyRecord, VerdictRecord,
};
use fhe_lattice_harness::{
    run_attack_campaign, run_estimate, run_gamma_sweep, run_scheme_selftest, run_toy_repro, seeds, ExperimentSpec,
    Scheme, ToyOptions,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "fhe-lattice", version, about = "DGHV lattice-attack workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long, default_value_t = 3)]
    lambda: u32,
    #[arg(long)]
    rho: Option<u64>,
    #[arg(long)]
    eta: Option<u64>,
    /// Public-integer bits; τ follows as γ + λ unless --tau is given.
    #[arg(long)]
    gamma: Option<u64>,
    #[arg(long)]
    tau: Option<u64>,
    #[arg(long)]
    subset_size: Option<u64>,
}

impl ParamArgs {
    fn params(&self) -> anyhow::Result<Params> {
        let mut p = Params::defaults(self.lambda);
        if let Some(rho) = self.rho {
            p.rho = rho;
        }
        if let Some(eta) = self.eta {
            p.eta = eta;
        }
        if let Some(gamma) = self.gamma {
            p.gamma = gamma;
            p.tau = gamma + self.lambda as u64;
        }
        if let Some(tau) = self.tau {
            p.tau = tau;
        }
        if let Some(t) = self.subset_size {
            p.subset_size = t;
        }
        p.validate()?;
        Ok(p)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeArg {
    L,
    L1,
}

#[derive(Args, Clone)]
struct AttackArgs {
    /// LLL parameter as a fraction `a/b` or a decimal.
    #[arg(long, default_value = "3/4", value_parser = parse_delta)]
    delta: Delta,
    /// Maximum number of subsets tried per ciphertext.
    #[arg(long, default_value_t = 5)]
    retries: usize,
    /// Reduced rows scanned for a first-vector candidate.
    #[arg(long, default_value_t = 5)]
    depth: usize,
    #[arg(long, value_enum, default_value_t = LatticeArg::L1)]
    lattice: LatticeArg,
}

impl AttackArgs {
    fn variant(&self) -> LatticeVariant {
        match self.lattice {
            LatticeArg::L => LatticeVariant::L,
            LatticeArg::L1 => LatticeVariant::L1,
        }
    }
}

fn parse_delta(s: &str) -> Result<Delta, String> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (
            a.trim().parse::<u64>().map_err(|e| e.to_string())?,
            b.trim().parse::<u64>().map_err(|e| e.to_string())?,
        ),
        None => {
            let (int, frac) = s.split_once('.').unwrap_or((s, ""));
            let digits = format!("{int}{frac}");
            let num = digits.parse::<u64>().map_err(|e| e.to_string())?;
            let den = 10u64
                .checked_pow(frac.len() as u32)
                .ok_or_else(|| "too many decimal places".to_string())?;
            (num, den)
        }
    };
    Delta::new(num, den).map_err(|e| e.to_string())
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThresholdArg {
    Knownp,
    Eta,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct CiphertextSource {
    /// Ciphertext record written by `encrypt`.
    #[arg(long)]
    ciphertext: Option<PathBuf>,
    /// Ciphertext as a decimal or 0x-prefixed hex integer.
    #[arg(long, allow_hyphen_values = true)]
    value: Option<String>,
}

impl CiphertextSource {
    fn load(&self) -> anyhow::Result<fhe_lattice::dghv::Ciphertext> {
        match (&self.ciphertext, &self.value) {
            (Some(path), _) => Ok(read_json::<CiphertextRecord>(path)?.ciphertext()?),
            (None, Some(v)) => Ok(fhe_lattice::dghv::Ciphertext::new(parse_bigint(v)?)),
            (None, None) => bail!("a ciphertext is required"),
        }
    }
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Number of instances.
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 5)]
    per_instance: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a DGHV key pair.
    Keygen {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Omit the secret p from the record.
        #[arg(long)]
        public_only: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Encrypt one bit under a key record.
    Encrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        bit: u8,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Decrypt with the secret p of a key record.
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[command(flatten)]
        source: CiphertextSource,
    },
    /// Attack a single ciphertext.
    Attack {
        #[arg(long)]
        key: PathBuf,
        #[command(flatten)]
        source: CiphertextSource,
        #[arg(long)]
        subset_size: Option<usize>,
        #[command(flatten)]
        attack: AttackArgs,
        #[arg(long, value_enum, default_value_t = ThresholdArg::Eta)]
        threshold_mode: ThresholdArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Attack many fresh ciphertexts and compare with the plaintexts.
    Campaign {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        attack: AttackArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the same campaign at several values of γ.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated γ values; defaults to λ⁵,λ⁶.
        #[arg(long, value_delimiter = ',')]
        gammas: Vec<u64>,
        #[command(flatten)]
        attack: AttackArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Print a full attack transcript on a λ = 3 instance.
    Toy {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        bit: Option<u8>,
        #[arg(long, default_value_t = 5)]
        retries: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Predict attack feasibility for a parameter set.
    Estimate {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the round-trip and homomorphic property suites.
    Selftest {
        #[arg(long, value_enum, default_value_t = SchemeArg::Dghv)]
        scheme: SchemeArg,
        #[arg(long, default_value_t = 3)]
        lambda: u32,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Matrix-key scheme operations.
    #[command(subcommand)]
    Matshe(MatCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Dghv,
    Matshe,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    RandomT,
    Gaussian,
}

#[derive(Subcommand)]
enum MatCommand {
    Keygen {
        #[arg(long, default_value_t = 3)]
        lambda: u32,
        #[arg(long, value_enum, default_value_t = VariantArg::RandomT)]
        variant: VariantArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    Enc {
        #[arg(long)]
        key: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        bit: u8,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    Add {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    Mul {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    Dec {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        ciphertext: PathBuf,
    },
}

fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit_text(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(value: &T, out: &OutArgs) -> anyhow::Result<()> {
    ensure!(out.format == Format::Json, "csv output is only available for campaign and sweep");
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit_text(&text, out.out.as_deref())
}

fn spec_from(params: &ParamArgs, attack: &AttackArgs, budget: &BudgetArgs) -> anyhow::Result<ExperimentSpec> {
    let params = params.params()?;
    let mut spec = ExperimentSpec::new(params, budget.seed);
    spec.instances = budget.trials;
    spec.ciphertexts_per_instance = budget.per_instance;
    spec.max_subset_retries = attack.retries;
    spec.candidate_scan_depth = attack.depth;
    spec.delta = attack.delta;
    spec.variant = attack.variant();
    Ok(spec)
}

/// Soundness failures are reported through exit code 2.
enum Status {
    Ok,
    Unsound(usize),
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    match cli.command {
        Command::Keygen {
            params,
            seed,
            public_only,
            out,
        } => {
            let params = params.params()?;
            let kp = keygen(&params, &mut seeds::rng(seed), false)?;
            emit_json(&InstanceRecord::new(&kp, seed, !public_only), &out)?;
        }
        Command::Encrypt { key, bit, seed, out } => {
            let rec: InstanceRecord = read_json(&key)?;
            let params = rec.params()?;
            let x = rec.public_x()?;
            let pk = fhe_lattice::dghv::PublicKey { params: &params, x: &x };
            let c = encrypt(pk, bit, &mut seeds::rng(seed))?;
            emit_json(&CiphertextRecord::new(&c), &out)?;
        }
        Command::Decrypt { key, source } => {
            let rec: InstanceRecord = read_json(&key)?;
            let p = rec.secret_p()?.ok_or_else(|| anyhow!("key record carries no secret p"))?;
            println!("{}", decrypt(&p, &source.load()?));
        }
        Command::Attack {
            key,
            source,
            subset_size,
            attack: args,
            threshold_mode,
            seed,
            out,
        } => {
            let rec: InstanceRecord = read_json(&key)?;
            let params = rec.params()?;
            let x = rec.public_x()?;
            let pk = fhe_lattice::dghv::PublicKey { params: &params, x: &x };
            let mut config = AttackConfig::new(&params);
            if let Some(t) = subset_size {
                config.subset_size = t;
            }
            config.max_subset_retries = args.retries;
            config.candidate_scan_depth = args.depth;
            config.delta = args.delta;
            config.variant = args.variant();
            config.threshold_mode = match threshold_mode {
                ThresholdArg::Eta => ThresholdMode::EtaFloor,
                ThresholdArg::Knownp => ThresholdMode::KnownP(
                    rec.secret_p()?
                        .ok_or_else(|| anyhow!("known-p threshold needs a key record with p"))?,
                ),
            };
            let c = source.load()?;
            let start = Instant::now();
            let verdict = attack(pk, &c, &config, &mut seeds::rng(seed))?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            emit_json(&VerdictRecord::new(&verdict, ms), &out)?;
        }
        Command::Campaign {
            params,
            attack,
            budget,
            out,
        } => {
            let report = run_attack_campaign(&spec_from(&params, &attack, &budget)?)?;
            match out.format {
                Format::Json => emit_json(&report, &out)?,
                Format::Csv => emit_text(&campaign_csv(&report)?, out.out.as_deref())?,
            }
            eprintln!(
                "known-p: {}/{} correct, {} wrong, {} inconclusive; eta-floor: {}/{} correct",
                report.known_p.successes,
                report.known_p.trials,
                report.known_p.failures,
                report.known_p.inconclusive,
                report.eta_floor.successes,
                report.eta_floor.trials
            );
            if report.soundness_failures > 0 {
                return Ok(Status::Unsound(report.soundness_failures));
            }
        }
        Command::Sweep {
            params,
            gammas,
            attack,
            budget,
            out,
        } => {
            let mut spec = spec_from(&params, &attack, &budget)?;
            spec.gammas = gammas;
            let report = run_gamma_sweep(&spec)?;
            match out.format {
                Format::Json => emit_json(&report, &out)?,
                Format::Csv => emit_text(&sweep_csv(&report)?, out.out.as_deref())?,
            }
            for e in &report.entries {
                eprintln!(
                    "gamma {}: known-p success rate {:.3}, predicted margin {:.1} bits",
                    e.gamma, e.report.known_p.success_rate, e.estimate.lll_average_margin_log2
                );
            }
            if report.soundness_failures() > 0 {
                return Ok(Status::Unsound(report.soundness_failures()));
            }
        }
        Command::Toy { seed, bit, retries, out } => {
            let transcript = run_toy_repro(&ToyOptions {
                seed,
                bit,
                max_subset_retries: retries,
            })?;
            emit_text(&transcript.text, out.as_deref())?;
        }
        Command::Estimate { params, out } => emit_json(&run_estimate(&params.params()?)?, &out)?,
        Command::Selftest {
            scheme,
            lambda,
            trials,
            seed,
            out,
        } => {
            let scheme = match scheme {
                SchemeArg::Dghv => Scheme::Dghv,
                SchemeArg::Matshe => Scheme::Matshe,
            };
            let report = run_scheme_selftest(lambda, scheme, trials, seed)?;
            for c in &report.checks {
                eprintln!("{:<28} passed {:>5}  failed {:>3}  skipped {:>5}", c.name, c.passed, c.failed, c.skipped);
            }
            emit_json(&report, &out)?;
            ensure!(report.failures() == 0, "{} self-test failures", report.failures());
        }
        Command::Matshe(cmd) => run_matshe(cmd)?,
    }
    Ok(Status::Ok)
}

fn run_matshe(cmd: MatCommand) -> anyhow::Result<()> {
    match cmd {
        MatCommand::Keygen {
            lambda,
            variant,
            seed,
            out,
        } => {
            let variant = match variant {
                VariantArg::RandomT => MatSheVariant::RandomT,
                VariantArg::Gaussian => MatSheVariant::Gaussian,
            };
            let config = MatSheConfig::new(lambda, variant)?;
            let kp = mat_keygen(&config, &mut seeds::rng(seed), false)?;
            emit_json(&MatKeyRecord::new(&kp, seed), &out)
        }
        MatCommand::Enc { key, bit, seed, out } => {
            let rec: MatKeyRecord = read_json(&key)?;
            let (modulus, b) = (rec.modulus()?, rec.public_b()?);
            let pk = fhe_lattice::matshe::MatPublicKey {
                lambda: rec.lambda,
                modulus: &modulus,
                b: &b,
            };
            let c = mat_encrypt(pk, bit, &mut seeds::rng(seed))?;
            emit_json(&MatCiphertextRecord::new(&c, parse_variant(&rec.variant)?, &modulus), &out)
        }
        MatCommand::Add { left, right, out } => mat_binary(&left, &right, &out, mat_add),
        MatCommand::Mul { left, right, out } => mat_binary(&left, &right, &out, mat_mul),
        MatCommand::Dec { key, ciphertext } => {
            let kp = read_json::<MatKeyRecord>(&key)?
                .key_pair()?
                .ok_or_else(|| anyhow!("key record carries no secret"))?;
            let c = read_json::<MatCiphertextRecord>(&ciphertext)?.ciphertext()?;
            println!("{}", mat_decrypt(&kp, &c));
            Ok(())
        }
    }
}

fn mat_binary(
    left: &Path,
    right: &Path,
    out: &OutArgs,
    op: fn(&fhe_lattice::matshe::MatCiphertext, &fhe_lattice::matshe::MatCiphertext, &num_bigint::BigInt) -> fhe_lattice::matshe::MatCiphertext,
) -> anyhow::Result<()> {
    let a: MatCiphertextRecord = read_json(left)?;
    let b: MatCiphertextRecord = read_json(right)?;
    ensure!(a.modulus == b.modulus && a.variant == b.variant, "ciphertexts come from different keys");
    let modulus = parse_bigint(&a.modulus)?;
    let c = op(&a.ciphertext()?, &b.ciphertext()?, &modulus);
    emit_json(&MatCiphertextRecord::new(&c, parse_variant(&a.variant)?, &modulus), out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Unsound(n)) => {
            eprintln!("error: {n} conclusive verdicts contradict the plaintext");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
