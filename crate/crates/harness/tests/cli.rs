use std::path::Path;
use std::process::{Command, Output};

use fhe_lattice_harness::schema::{CiphertextRecord, InstanceRecord, VerdictRecord};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fhe-lattice"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

const TOY: [&str; 8] = ["--lambda", "3", "--rho", "3", "--eta", "27", "--seed", "4"];

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["keygen", "--lambda", "x"]).status.code(), Some(1));
    assert_eq!(run(&["attack", "--key", "k.json"]).status.code(), Some(1));
    assert_eq!(run(&["campaign", "--delta", "1/5"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn key_encrypt_decrypt_attack() {
    let dir = tempfile::tempdir().unwrap();
    let (key, ct) = (path(dir.path(), "key.json"), path(dir.path(), "ct.json"));
    let mut args = vec!["keygen"];
    args.extend(TOY);
    args.extend(["--out", &key]);
    assert!(run(&args).status.success());
    let rec: InstanceRecord = serde_json::from_str(&std::fs::read_to_string(&key).unwrap()).unwrap();
    assert_eq!(rec.schema_version, 1);
    assert_eq!(rec.x.len(), 247);
    assert!(rec.p.is_some());

    for bit in ["0", "1"] {
        let o = run(&["encrypt", "--key", &key, "--bit", bit, "--seed", "9", "--out", &ct]);
        assert!(o.status.success());
        let c: CiphertextRecord = serde_json::from_str(&std::fs::read_to_string(&ct).unwrap()).unwrap();
        let o = run(&["decrypt", "--key", &key, "--ciphertext", &ct]);
        assert_eq!(stdout(&o).trim(), bit);
        let o = run(&["decrypt", "--key", &key, "--value", &c.c]);
        assert_eq!(stdout(&o).trim(), bit);

        let o = run(&["attack", "--key", &key, "--ciphertext", &ct, "--threshold-mode", "knownp"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let v: VerdictRecord = serde_json::from_str(&stdout(&o)).unwrap();
        if let Some(d) = v.decision {
            assert_eq!(d.to_string(), bit);
        }
    }
}

#[test]
fn public_only_key_cannot_decrypt() {
    let dir = tempfile::tempdir().unwrap();
    let key = path(dir.path(), "pub.json");
    let mut args = vec!["keygen", "--public-only"];
    args.extend(TOY);
    args.extend(["--out", &key]);
    assert!(run(&args).status.success());
    let o = run(&["decrypt", "--key", &key, "--value", "7"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn hex_ciphertext_values() {
    let dir = tempfile::tempdir().unwrap();
    let key = path(dir.path(), "key.json");
    let mut args = vec!["keygen"];
    args.extend(TOY);
    args.extend(["--out", &key]);
    assert!(run(&args).status.success());
    assert_eq!(stdout(&run(&["decrypt", "--key", &key, "--value", "0x7"])).trim(), "1");
    assert_eq!(stdout(&run(&["decrypt", "--key", &key, "--value", "-0x6"])).trim(), "0");
    assert_eq!(run(&["decrypt", "--key", &key, "--value", "0xG"]).status.code(), Some(1));
}

#[test]
fn matrix_scheme_commands() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| path(dir.path(), n);
    for variant in ["random-t", "gaussian"] {
        assert!(run(&["matshe", "keygen", "--lambda", "3", "--variant", variant, "--out", &p("k.json")]).status.success());
        for (bit, seed, name) in [("1", "1", "a.json"), ("0", "2", "b.json"), ("1", "3", "c.json")] {
            let o = run(&["matshe", "enc", "--key", &p("k.json"), "--bit", bit, "--seed", seed, "--out", &p(name)]);
            assert!(o.status.success());
        }
        let dec = |name: &str| stdout(&run(&["matshe", "dec", "--key", &p("k.json"), "--ciphertext", &p(name)])).trim().to_string();
        assert_eq!(dec("a.json"), "1");
        assert_eq!(dec("b.json"), "0");
        assert!(run(&["matshe", "add", &p("a.json"), &p("b.json"), "--out", &p("sum.json")]).status.success());
        assert_eq!(dec("sum.json"), "1");
        assert!(run(&["matshe", "add", &p("a.json"), &p("c.json"), "--out", &p("sum2.json")]).status.success());
        assert_eq!(dec("sum2.json"), "0");
    }
}

#[test]
fn toy_transcript_is_reproducible() {
    let a = run(&["toy", "--seed", "3"]);
    let b = run(&["toy", "--seed", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("U*C = B: verified"));
    assert!(text.contains("parity of first column of U"));
}

#[test]
fn campaign_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "c.csv");
    let mut args = vec!["campaign", "--trials", "2", "--per-instance", "2", "--format", "csv", "--out", &csv];
    args.extend(TOY);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("instance,ciphertext,instance_seed"));

    let o = run(&["estimate", "--lambda", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn selftest_and_estimate() {
    let o = run(&["selftest", "--scheme", "matshe", "--lambda", "3", "--trials", "50"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], 1);

    let o = run(&["estimate", "--lambda", "3", "--eta", "27", "--rho", "3", "--gamma", "729"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["params"]["tau"], 732);
    assert_eq!(v["lll_average_feasible"], false);
}
