//! Behavioral tests of the `matpos` binary: exit codes, reports, and file
//! contents for the documented command set.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matpos"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, contents: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

const POLY_2_PLUS_X_I2: &str = r#"{
  "n": 1, "t": 2,
  "terms": [
    {"alpha": [0], "matrix": [["2", "0"], ["0", "2"]]},
    {"alpha": [1], "matrix": [["1", "0"], ["0", "1"]]}
  ]
}"#;

const POLY_X_I: &str = r#"{
  "n": 1, "t": 1,
  "terms": [{"alpha": [1], "matrix": [["1"]]}]
}"#;

const MEASURE_HALF_I2: &str = r#"{
  "n": 1, "t": 2,
  "atoms": [{"point": ["1/2"], "weight": [["1", "0"], ["0", "1"]]}]
}"#;

#[test]
fn certify_succeeds_and_verifies() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "poly.json", POLY_2_PLUS_X_I2);
    let cert = dir.path().join("cert.json");
    let cert = cert.to_str().unwrap();

    let out = run(&[
        "certify", "--domain", "interval", "--input", &poly, "--output", cert,
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("N = 0"));
    assert!(stderr(&out).contains("terms = 2"));
    assert!(Path::new(cert).exists());

    let out = run(&["verify", "--certificate", cert, "--input", &poly]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "valid\n");
}

#[test]
fn certify_reports_violations_with_exit_one() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "x.json", POLY_X_I);
    let out = run(&["certify", "--domain", "interval", "--input", &poly]);
    assert_eq!(exit_code(&out), 1);
    let log = stderr(&out);
    assert!(log.contains("point [-1]"), "log: {log}");
    assert!(log.contains("witness"), "log: {log}");
    // stdout stays pure: no certificate was produced
    assert_eq!(stdout(&out), "");
}

#[test]
fn certify_malformed_input_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{ not json");
    let out = run(&["certify", "--domain", "interval", "--input", &bad]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn certify_missing_file_is_usage_error() {
    let out = run(&[
        "certify",
        "--domain",
        "interval",
        "--input",
        "/nonexistent.json",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn certify_interior_zero_is_inconclusive() {
    // (x − 1/3)² is nonnegative with an off-grid zero: the grid scan passes
    // but no strictly positive certificate exists, so the cap is exhausted.
    let dir = TempDir::new().unwrap();
    let poly = write(
        &dir,
        "offgrid.json",
        r#"{"n": 1, "t": 1, "terms": [
            {"alpha": [0], "matrix": [["1/9"]]},
            {"alpha": [1], "matrix": [["-2/3"]]},
            {"alpha": [2], "matrix": [["1"]]}
        ]}"#,
    );
    let out = run(&[
        "certify", "--domain", "interval", "--input", &poly, "--n-max", "5",
    ]);
    assert_eq!(exit_code(&out), 3);
    let log = stderr(&out);
    assert!(log.contains("n_max = 5"), "log: {log}");
    assert!(log.contains("not positive definite"), "log: {log}");
}

#[test]
fn certify_asymmetric_coefficient_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let poly = write(
        &dir,
        "asym.json",
        r#"{"n": 1, "t": 2, "terms": [{"alpha": [0], "matrix": [["1", "1"], ["0", "1"]]}]}"#,
    );
    let out = run(&["certify", "--domain", "interval", "--input", &poly]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn certify_reads_stdin() {
    let mut child = bin()
        .args(["certify", "--domain", "interval", "--input", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(POLY_2_PLUS_X_I2.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(exit_code(&out), 0);
    // certificate JSON lands on stdout when no output path is given
    assert!(stdout(&out).contains("\"G\""));
}

#[test]
fn verify_rejects_tampered_certificate() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "poly.json", POLY_2_PLUS_X_I2);
    let cert_path = dir.path().join("cert.json");
    let cert_path = cert_path.to_str().unwrap();
    let out = run(&[
        "certify", "--domain", "interval", "--input", &poly, "--output", cert_path,
    ]);
    assert_eq!(exit_code(&out), 0);

    let cert = std::fs::read_to_string(cert_path).unwrap();
    let doubled = cert.replacen("\"1/2\"", "\"1\"", 2);
    assert_ne!(cert, doubled);
    let tampered = write(&dir, "tampered.json", &doubled);
    let out = run(&["verify", "--certificate", &tampered, "--input", &poly]);
    assert_eq!(exit_code(&out), 1);
    assert!(stdout(&out).starts_with("invalid"));

    let negated = cert.replace("\"3/2\"", "\"-3/2\"");
    let negated = write(&dir, "negated.json", &negated);
    let out = run(&["verify", "--certificate", &negated, "--input", &poly]);
    assert_eq!(exit_code(&out), 1);
    assert!(stdout(&out).contains("not positive definite"));
}

#[test]
fn verify_missing_certificate_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "poly.json", POLY_2_PLUS_X_I2);
    let out = run(&["verify", "--certificate", "/nope.json", "--input", &poly]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn sample_measure_emits_exact_moments() {
    let dir = TempDir::new().unwrap();
    let measure = write(&dir, "measure.json", MEASURE_HALF_I2);
    let out = run(&["sample-measure", "--input", &measure, "--level", "2"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["level"], 2);
    let entries = parsed["S"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    assert_eq!(entries[0]["matrix"][0][0], "1");
    assert_eq!(entries[1]["matrix"][0][0], "1/2");
    assert_eq!(entries[2]["matrix"][1][1], "1/4");
}

#[test]
fn riesz_matches_integrate_on_worked_example() {
    let dir = TempDir::new().unwrap();
    let measure = write(&dir, "measure.json", MEASURE_HALF_I2);
    let poly = write(&dir, "poly.json", POLY_2_PLUS_X_I2);
    let seq_path = dir.path().join("seq.json");
    let seq_path = seq_path.to_str().unwrap();

    let out = run(&[
        "sample-measure",
        "--input",
        &measure,
        "--level",
        "2",
        "--output",
        seq_path,
    ]);
    assert_eq!(exit_code(&out), 0);

    let riesz = run(&["riesz", "--sequence", seq_path, "--poly", &poly]);
    assert_eq!(exit_code(&riesz), 0);
    assert_eq!(stdout(&riesz), "5\n");

    let integrate = run(&["integrate", "--measure", &measure, "--poly", &poly]);
    assert_eq!(exit_code(&integrate), 0);
    assert_eq!(stdout(&integrate), "5\n");
}

#[test]
fn moment_check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let measure = write(&dir, "measure.json", MEASURE_HALF_I2);
    let seq_path = dir.path().join("seq.json");
    let seq_path = seq_path.to_str().unwrap();
    run(&[
        "sample-measure",
        "--input",
        &measure,
        "--level",
        "3",
        "--output",
        seq_path,
    ]);

    let pass = run(&[
        "moment-check",
        "--domain",
        "interval",
        "--input",
        seq_path,
        "--level",
        "3",
    ]);
    assert_eq!(exit_code(&pass), 0);
    assert!(stdout(&pass).starts_with("pass"));

    let bad = write(
        &dir,
        "bad_seq.json",
        r#"{"n": 1, "t": 2, "level": 0,
            "S": [{"alpha": [0], "matrix": [["1", "0"], ["0", "-1"]]}]}"#,
    );
    let fail = run(&["moment-check", "--domain", "interval", "--input", &bad]);
    assert_eq!(exit_code(&fail), 1);
    assert!(stdout(&fail).contains("fail at index [0, 0]"));
    assert!(stdout(&fail).contains("witness"));

    let too_high = run(&[
        "moment-check",
        "--domain",
        "interval",
        "--input",
        seq_path,
        "--level",
        "9",
    ]);
    assert_eq!(exit_code(&too_high), 2);

    let wrong_domain = run(&[
        "moment-check",
        "--domain",
        "hypercube",
        "--input",
        seq_path,
        "--level",
        "2",
    ]);
    assert_eq!(exit_code(&wrong_domain), 0); // hypercube with n = 1 is legal

    let incomplete = write(
        &dir,
        "incomplete.json",
        r#"{"n": 1, "t": 1, "level": 2, "S": [{"alpha": [0], "matrix": [["1"]]}]}"#,
    );
    let out = run(&[
        "moment-check",
        "--domain",
        "interval",
        "--input",
        &incomplete,
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["certify", "--domain", "moebius", "--input", "x.json"]);
    assert_eq!(exit_code(&out), 2);
    let out = run(&["no-such-command"]);
    assert_eq!(exit_code(&out), 2);
}
