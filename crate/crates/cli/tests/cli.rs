//! End-to-end behavior of the `fusionring` binary: exit codes, output
//! formats, environment overrides, and input validation.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fusionring"));
    c.env_remove("FUSIONRING_PRECISION");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("fring-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn passing_check_exits_zero() {
    let out = run(&["check", "catalog:fibonacci", "--criterion", "all", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS axioms on fibonacci"));
    assert!(text.contains("PASS strong-isaacs on fibonacci"));
    assert!(text.contains("summary: 10 pass, 0 fail, 0 inconclusive"));
}

#[test]
fn axiom_violation_exits_one_with_witness() {
    // b1*b1 = b1 alone violates the duality pairing (no unit component).
    let path = temp_file(
        "dual-violation.fring",
        "ring broken\nrank = 2\nunit = 0\ndual = [0, 1]\nN[1,1] = {1:1}\n",
    );
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL axioms on broken"), "{text}");
    assert!(text.contains("witness"), "{text}");
    let _ = std::fs::remove_file(path);
}

#[test]
fn grammar_error_exits_three() {
    let path = temp_file("garbage.fring", "this is not a ring file\n");
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).is_empty());
    assert!(!stderr(&out).is_empty());
    let _ = std::fs::remove_file(path);
}

#[test]
fn missing_file_and_unknown_catalog_exit_three() {
    let out = run(&["check", "/nonexistent/path/x.fring"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["check", "catalog:not_a_ring"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("unknown catalog ring"));
}

#[test]
fn usage_errors_exit_three() {
    for args in [
        &["chekc", "catalog:fibonacci"][..],
        &["check", "catalog:fibonacci", "--bogus-flag"][..],
        &["check", "catalog:fibonacci", "--criterion", "nope"][..],
        &["check", "catalog:fibonacci", "--precision", "32"][..],
        &["check", "catalog:fibonacci", "--n", "9"][..],
        &["check", "catalog:fibonacci", "--tol", "-8"][..],
        &["check", "catalog:fibonacci", "--s", "-1"][..],
        &["check", "catalog:fibonacci", "--s", "1/0"][..],
        &["oracle", "s3", "--n", "2"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(3), "args {args:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty(), "args {args:?} should explain on stderr");
    }
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("check"));
}

#[test]
fn json_format_is_schema_shaped() {
    let out = run(&["check", "catalog:ising", "--criterion", "schur", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 1);
    assert_eq!(arr[0]["ring"], "ising");
    assert_eq!(arr[0]["criterion"], "schur");
    assert_eq!(arr[0]["verdict"], "pass");
    assert_eq!(arr[0]["precision_bits"], 256);
    assert_eq!(arr[0]["tolerance"], "10^-40");
    assert!(arr[0]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn spectra_json_has_codegrees() {
    let out = run(&["spectra", "catalog:rep_s3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["ring"], "rep_s3");
    assert_eq!(v["commutative"], true);
    let mut cods: Vec<f64> = v["codegrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap().parse().unwrap())
        .collect();
    cods.sort_by(f64::total_cmp);
    assert_eq!(cods, vec![2.0, 3.0, 6.0]);
    assert_eq!(v["fpdim"].as_str().unwrap().parse::<f64>().unwrap(), 6.0);
}

#[test]
fn environment_sets_default_precision_and_flags_win() {
    let with_env = |extra: &[&str]| {
        let mut c = bin();
        c.env("FUSIONRING_PRECISION", "128");
        c.args(["check", "catalog:fibonacci", "--criterion", "axioms", "--format", "json"]);
        c.args(extra);
        c.output().unwrap()
    };
    let out = with_env(&[]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["precision_bits"], 128);

    let out = with_env(&["--precision", "192"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["precision_bits"], 192);

    let mut c = bin();
    c.env("FUSIONRING_PRECISION", "twelve");
    c.args(["check", "catalog:fibonacci"]);
    let out = c.output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn catalog_show_round_trips() {
    let out = run(&["catalog", "show", "fibonacci"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("rank = 2"));
    assert!(text.contains("N[1,1] = {0:1, 1:1}"));
    let out = run(&["catalog", "show", "nope"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["catalog", "list"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("fibonacci"));
}

#[test]
fn oracle_subcommand_agrees() {
    let out = run(&["oracle", "s3", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("count for three transpositions: 0"), "{text}");
    assert!(text.contains("count for two transpositions and the identity: 3"), "{text}");
    assert!(text.contains("exact counts agree"), "{text}");
}

#[test]
fn noncommutative_integrality_is_inconclusive_exit_two() {
    let out = run(&["check", "catalog:vec_s3", "--criterion", "isaacs"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("INCONCLUSIVE"));
}

#[test]
fn lpw_on_noncommutative_ring_routes_to_search() {
    let out = run(&["check", "catalog:vec_s3", "--criterion", "lpw"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS lpw-general on vec_s3"), "{text}");
    assert!(text.contains("noncommutative"), "{text}");
}
