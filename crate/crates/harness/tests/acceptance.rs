//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::process::ExitCode;
use std::str::FromStr;
use std::time::{Duration, Instant};

use fhe_lattice::arith::{norm_sq, uniform_symmetric};
use fhe_lattice::dghv::{brute_force_agcd, decrypt, keygen, Ciphertext};
use fhe_lattice::lattice::{bound_lll_average, determinant, is_lll_reduced, lll_reduce, mat_mul, shortest_vector, Delta, LatticeBasis};
use fhe_lattice::Params;
use fhe_lattice_harness::toy::toy_params;
use fhe_lattice_harness::{
    run_attack_campaign, run_estimate, run_gamma_sweep, run_scheme_selftest, run_toy_repro, ExperimentSpec, Scheme, ToyOptions,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Name, check, runtime budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn check(cond: bool, ok: String, fail: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(fail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    format!("error: {e}")
}

fn dghv_round_trip() -> Outcome {
    let mut notes = Vec::new();
    for lambda in [2, 3, 4] {
        let r = run_scheme_selftest(lambda, Scheme::Dghv, 1000, 11).map_err(err)?;
        let rt = r.check("round-trip").expect("round-trip check");
        let noise = r.check("fresh-noise-bound").expect("noise check");
        if rt.passed != 1000 || noise.passed != 1000 {
            return Err(format!(
                "lambda {lambda}: round-trip {}/1000, noise bound {}/1000",
                rt.passed, noise.passed
            ));
        }
        notes.push(format!("lambda {lambda}: 1000/1000"));
    }
    Ok(notes.join(", "))
}

fn random_basis(rng: &mut ChaCha8Rng, n: usize) -> LatticeBasis {
    loop {
        let rows: Vec<Vec<BigInt>> = (0..n).map(|_| (0..n).map(|_| uniform_symmetric(rng, 20)).collect()).collect();
        let b = LatticeBasis::new(rows).expect("square rows");
        if !determinant(b.rows()).expect("square").is_zero() {
            return b;
        }
    }
}

fn lll_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let delta = Delta::default();
    for trial in 0..100 {
        let n = 2 + trial % 7;
        let b = random_basis(&mut rng, n);
        let out = lll_reduce(&b, delta).map_err(err)?;
        let fail = |what: &str| Err(format!("basis {trial} (dim {n}): {what}"));
        if !is_lll_reduced(&out.reduced, delta).map_err(err)? {
            return fail("output not reduced");
        }
        if !determinant(&out.transform).map_err(err)?.magnitude().is_one() {
            return fail("|det U| != 1");
        }
        if mat_mul(&out.transform, b.rows()).map_err(err)? != out.reduced.rows() {
            return fail("U*C != B");
        }
        let lambda1_sq = norm_sq(&shortest_vector(&out.reduced).map_err(err)?);
        if norm_sq(out.reduced.row(0)) > lambda1_sq << (n - 1) {
            return fail("first vector exceeds 2^((n-1)/2)*lambda1");
        }
    }
    Ok("100 bases, dims 2-8, 0 violations".into())
}

fn toy_spec(seed: u64) -> ExperimentSpec {
    ExperimentSpec::new(toy_params(), seed)
}

fn toy_campaign() -> Outcome {
    let report = run_attack_campaign(&toy_spec(3)).map_err(err)?;
    let s = &report.known_p;
    let summary = format!(
        "{} trials over {} instances: {} correct, {} wrong, {} inconclusive (conclusive rate {:.2}); eta-floor {} correct",
        s.trials,
        report.config.instances,
        s.successes,
        s.failures,
        s.inconclusive,
        s.conclusive() as f64 / s.trials as f64,
        report.eta_floor.successes,
    );
    check(
        report.soundness_failures == 0 && s.successes >= 1 && report.config.instances >= 20,
        summary.clone(),
        summary,
    )
}

fn published_ciphertext() -> Outcome {
    let p = BigInt::from(134_217_729u64);
    let c = BigInt::from_str("-196848789281973859727465844151315553725055119450697291705147663567242373").expect("literal");
    let bit = decrypt(&p, &Ciphertext::new(c));
    check(bit == 1, "decrypts to 1".into(), format!("decrypts to {bit}"))
}

fn estimator() -> Outcome {
    let within = |x: f64, target: f64| (x - target).abs() / target < 0.02;
    let avg = bound_lll_average(100);
    let params = Params::from_lambda(100).and_then(|p| p.with_eta(50_000)).map_err(err)?;
    let r = run_estimate(&params).map_err(err)?;
    let (beta, total) = (
        r.block_factor_per_lambda_sq.unwrap_or(f64::NAN),
        r.block_target_per_lambda_sq.unwrap_or(f64::NAN),
    );
    let msg = format!("1.02^100 = {avg:.3}, beta term {beta:.3} lambda^2, total {total:.3} lambda^2");
    check(within(avg, 7.24) && within(beta, 3.66) && within(total, 4.66), msg.clone(), msg)
}

fn matrix_she() -> Outcome {
    let mut notes = Vec::new();
    for lambda in [3, 4] {
        let r = run_scheme_selftest(lambda, Scheme::Matshe, 1000, 13).map_err(err)?;
        for variant in ["random-t", "gaussian"] {
            let get = |name: &str| r.check(&format!("{variant}/{name}")).expect("known check");
            let rt = get("round-trip");
            let (keys, add, mul) = (get("key-identities"), get("add-identity"), get("mul-identity"));
            if rt.passed != 1000 || r.failures() != 0 || keys.passed == 0 || add.passed == 0 || mul.passed == 0 {
                return Err(format!("lambda {lambda} {variant}: {:?}", r.checks));
            }
        }
        notes.push(format!("lambda {lambda}: 1000/1000 both variants"));
    }
    Ok(notes.join(", "))
}

fn sweep_spec() -> ExperimentSpec {
    let mut spec = toy_spec(5);
    spec.ciphertexts_per_instance = 2;
    spec.gammas = vec![243, 729];
    spec
}

fn gamma_sweep() -> Outcome {
    let report = run_gamma_sweep(&sweep_spec()).map_err(err)?;
    let rate = |i: usize| report.entries[i].report.known_p.success_rate;
    let msg = format!(
        "success rate {:.3} at gamma=243, {:.3} at gamma=729 ({} trials each; predicted margins {:.1} / {:.1} bits)",
        rate(0),
        rate(1),
        report.entries[0].report.known_p.trials,
        report.entries[0].estimate.lll_average_margin_log2,
        report.entries[1].estimate.lll_average_margin_log2,
    );
    check(rate(1) < rate(0) && report.soundness_failures() == 0, msg.clone(), msg)
}

fn agcd_oracle() -> Outcome {
    let params = Params::from_lambda(2).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut hits = 0;
    for _ in 0..10 {
        let kp = keygen(&params, &mut ChaCha8Rng::seed_from_u64(rng.gen()), true).map_err(err)?;
        if brute_force_agcd(&kp.pk_x, &params).ok().as_ref() == Some(&kp.sk_p) {
            hits += 1;
        }
    }
    check(hits == 10, "10/10 keys recovered".into(), format!("{hits}/10 keys recovered"))
}

fn determinism() -> Outcome {
    let a = run_attack_campaign(&toy_spec(3)).map_err(err)?;
    let b = run_attack_campaign(&toy_spec(3)).map_err(err)?;
    if a.without_timings() != b.without_timings() {
        return Err("campaign reports differ".into());
    }
    let a = run_gamma_sweep(&sweep_spec()).map_err(err)?;
    let b = run_gamma_sweep(&sweep_spec()).map_err(err)?;
    if a.without_timings() != b.without_timings() {
        return Err("sweep reports differ".into());
    }
    let opts = ToyOptions::default();
    if run_toy_repro(&opts).map_err(err)?.text != run_toy_repro(&opts).map_err(err)?.text {
        return Err("toy transcripts differ".into());
    }
    Ok("campaign, sweep and toy transcript reproduce exactly".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 dghv round-trip", dghv_round_trip, 120),
        ("2 lll soundness", lll_soundness, 60),
        ("3 toy-scale attack", toy_campaign, 600),
        ("4 published ciphertext", published_ciphertext, 1),
        ("5 estimator regression", estimator, 1),
        ("6 matrix she", matrix_she, 120),
        ("7 gamma sweep", gamma_sweep, 1800),
        ("8 agcd oracle", agcd_oracle, 60),
        ("9 determinism", determinism, 3600),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run, budget) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget}s budget")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("[{status}] {name} ({:.1}s): {detail}", elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
