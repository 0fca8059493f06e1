//! End-to-end tests of the binary: exit codes and the machine-parseable
//! `eval` output contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn uakit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uakit")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn eval_prints_exactly_true() {
    let out = uakit(&[
        "eval",
        fixture("fig1-left.json").to_str().unwrap(),
        "--state",
        "pq",
        "--formula",
        "K1 p",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "true\n");
}

#[test]
fn eval_prints_false_for_explicit_knowledge_of_q() {
    let out = uakit(&[
        "eval",
        fixture("fig1-right.json").to_str().unwrap(),
        "--state",
        "pq",
        "--formula",
        "K1 q",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "false\n");
}

#[test]
fn eval_prints_undefined_with_atoms() {
    let out = uakit(&[
        "eval",
        fixture("fig1-left.json").to_str().unwrap(),
        "--state",
        "*",
        "--formula",
        "p",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "undefined(p)\n");
}

#[test]
fn validate_passes_fixtures_and_fails_corruption() {
    for name in ["fig1-left.json", "fig1-right.json", "fig1-right-ikb.json"] {
        let out = uakit(&["validate", fixture(name).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}");
    }
    // A lambda block split below its projection image must fail.
    let text = std::fs::read_to_string(fixture("fig1-left.json")).unwrap();
    let broken = text.replace(r#"["q", "~q"]"#, r#"["q"], ["~q"]"#);
    let dir = std::env::temp_dir().join("uakit-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, broken).unwrap();
    let out = uakit(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    let out = uakit(&["eval", "/nonexistent.json", "--state", "x", "--formula", "p"]);
    assert_eq!(out.status.code(), Some(2));
    let out = uakit(&[
        "eval",
        fixture("fig1-left.json").to_str().unwrap(),
        "--state",
        "pq",
        "--formula",
        "K0 p",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn atom_cap_env_is_enforced() {
    let out = Command::new(env!("CARGO_BIN_EXE_uakit"))
        .args(["validate", fixture("fig1-left.json").to_str().unwrap()])
        .env("UAKIT_MAX_ATOMS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_uakit"))
        .args(["validate", fixture("fig1-left.json").to_str().unwrap()])
        .env("UAKIT_MAX_ATOMS", "99")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suites_pass_on_fixtures() {
    let out = uakit(&[
        "verify",
        fixture("fig1-right-ikb.json").to_str().unwrap(),
        "--suite",
        "all",
        "--jobs",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("lambda: pass"));
    assert!(text.contains("alpha: pass"));
}

#[test]
fn transform_round_trips_through_files() {
    let dir = std::env::temp_dir().join("uakit-cli-roundtrip");
    std::fs::create_dir_all(&dir).unwrap();
    let hms_path = dir.join("out.json");
    let trace_path = dir.join("trace.json");

    // FH fixture: write a small model, transform to a lattice model and
    // back, and re-validate at each step.
    let fh = r#"{
  "kind": "fh",
  "atoms": ["p"],
  "agents": 1,
  "worlds": ["a", "b"],
  "valuation": {"p": ["a"]},
  "relations": [[["a"], ["b"]]],
  "awareness": [{"a": ["p"], "b": []}]
}"#;
    let fh_path = dir.join("in.json");
    std::fs::write(&fh_path, fh).unwrap();
    let out = uakit(&[
        "transform",
        fh_path.to_str().unwrap(),
        "--to",
        "hms",
        "--out",
        hms_path.to_str().unwrap(),
        "--trace",
        trace_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(trace_path.exists());
    let out = uakit(&["verify", hms_path.to_str().unwrap(), "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let fh_back = dir.join("back.json");
    let out = uakit(&[
        "transform",
        hms_path.to_str().unwrap(),
        "--to",
        "fh",
        "--out",
        fh_back.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = uakit(&["validate", fh_back.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn random_is_deterministic() {
    let args = ["random", "--atoms", "2", "--worlds", "3", "--agents", "2", "--seed", "9", "--count", "3"];
    let a = stdout(&uakit(&args));
    let b = stdout(&uakit(&args));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 3);
}

#[test]
fn check_proof_accepts_and_rejects() {
    let dir = std::env::temp_dir().join("uakit-cli-proof");
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.json");
    std::fs::write(
        &good,
        r#"{
  "atoms": ["p"],
  "lines": [
    {"formula": "K1 p <-> (L1 p & A1 p)", "by": {"schema": "EK", "subst": {"phi": "p", "i": 1}}},
    {"formula": "(K1 p <-> (L1 p & A1 p)) -> (K1 p -> L1 p)", "by": {"schema": "PL"}},
    {"formula": "K1 p -> L1 p", "by": {"mp": [1, 2]}}
  ]
}"#,
    )
    .unwrap();
    let out = uakit(&["check-proof", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        r#"{
  "atoms": ["p"],
  "lines": [
    {"formula": "p", "by": {"schema": "PL"}}
  ]
}"#,
    )
    .unwrap();
    let out = uakit(&["check-proof", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
