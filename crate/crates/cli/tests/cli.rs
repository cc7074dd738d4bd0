//! End-to-end tests of the binary: spawn the real executable, check
//! stdout/stderr contracts, exit codes, and report determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use copface_core::report::{BoundsReport, CatalogReport, CertificateReport};

fn copface(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_copface"))
        .args(args)
        .env_remove("COPFACE_TOL_ZERO")
        .output()
        .expect("binary runs")
}

fn copface_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_copface"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("copface-cli-{}-{name}", std::process::id()));
    p
}

#[test]
fn hildebrand_writes_the_order_seven_circulant() {
    let out = copface(&["hildebrand", "--n", "7"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("7"));
    let first_row: Vec<f64> = lines
        .next()
        .expect("first data row")
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    let alpha = 2.0 + 2.0f64.sqrt();
    let t = std::f64::consts::PI / 8.0;
    let beta = -2.0 * (t.cos() + (3.0 * t).cos());
    let expected = [alpha, beta, 1.0, 0.0, 0.0, 1.0, beta];
    for (x, y) in first_row.iter().zip(expected.iter()) {
        assert!((x - y).abs() < 1e-12, "{first_row:?}");
    }
}

#[test]
fn even_order_is_a_precondition_failure_with_a_json_error() {
    let out = copface(&["hildebrand", "--n", "6"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value =
        serde_json::from_slice(&out.stderr).expect("stderr is a JSON object");
    assert_eq!(err["code"], 2);
    assert!(err["error"].as_str().unwrap().contains("unsupported order"));
}

#[test]
fn missing_files_exit_with_the_io_code() {
    let out = copface(&["zeros", "/nonexistent/copface-test-matrix.txt"]);
    assert_eq!(out.status.code(), Some(4));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["code"], 4);
}

#[test]
fn malformed_matrix_text_exits_with_the_io_code() {
    let path = temp_path("malformed.txt");
    std::fs::write(&path, "3\n1 2\n").unwrap();
    let out = copface(&["zeros", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    std::fs::remove_file(&path).ok();
}

#[test]
fn zeros_of_the_circulant_form_a_complete_catalog_of_five() {
    let path = temp_path("c5.txt");
    let gen = copface(&["hildebrand", "--n", "5", "--out", path.to_str().unwrap()]);
    assert!(gen.status.success());
    let out = copface(&["zeros", path.to_str().unwrap()]);
    assert!(out.status.success());
    let report: CatalogReport = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report.order, 5);
    assert_eq!(report.zeros.len(), 5);
    assert!(report.complete);
    assert!(report.exhaustive);
    for z in &report.zeros {
        assert_eq!(z.support.len(), 3);
        assert!(z.support.iter().all(|&k| (1..=5).contains(&k)));
    }
    std::fs::remove_file(&path).ok();
}

#[test]
fn certify_rejects_the_identity_on_both_counts() {
    let path = temp_path("id3.txt");
    std::fs::write(&path, "3\n1 0 0\n0 1 0\n0 0 1\n").unwrap();
    let out = copface(&["certify", path.to_str().unwrap()]);
    assert!(out.status.success());
    let report: CertificateReport = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(!report.extreme);
    assert!(!report.exposed);
    std::fs::remove_file(&path).ok();
}

#[test]
fn lift_writes_an_order_six_matrix_with_eight_zeros() {
    let base = temp_path("c5-for-lift.txt");
    let lifted = temp_path("b6.txt");
    copface(&["hildebrand", "--n", "5", "--out", base.to_str().unwrap()]);
    let out = copface(&[
        "lift",
        base.to_str().unwrap(),
        "--index-set",
        "1",
        "--out",
        lifted.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["I"], serde_json::json!([1]));
    assert_eq!(report["J0"], serde_json::json!([1, 2, 3]));
    assert_eq!(report["lifted_zeros"].as_array().unwrap().len(), 8);

    let text = std::fs::read_to_string(&lifted).unwrap();
    assert_eq!(text.lines().next(), Some("6"));

    // The written matrix feeds back into the pipeline: its fresh
    // enumeration has the same eight zeros, no longer a complete set
    // (three adjacent pairs).
    let zeros = copface(&["zeros", lifted.to_str().unwrap()]);
    assert!(zeros.status.success());
    let catalog: CatalogReport = serde_json::from_str(&stdout_of(&zeros)).unwrap();
    assert_eq!(catalog.order, 6);
    assert_eq!(catalog.zeros.len(), 8);
    assert!(!catalog.complete);
    assert!(catalog.exhaustive);

    std::fs::remove_file(&base).ok();
    std::fs::remove_file(&lifted).ok();
}

#[test]
fn bounds_json_row_for_order_eight_beats_the_prior_bound() {
    let out = copface(&["bounds", "--n", "8", "--json"]);
    assert!(out.status.success());
    let row: BoundsReport = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(row.n, 8);
    assert_eq!(row.lower_bound, 8);
    assert_eq!(row.upper_bound_constructed, 11);
    assert_eq!(row.prior_upper, Some(16));
    assert!(row.certificates.extreme);
    assert!(row.certificates.exposed);
}

#[test]
fn bounds_reports_are_deterministic_and_round_trip() {
    let first = copface(&["bounds", "--n", "6", "--json"]);
    let second = copface(&["bounds", "--n", "6", "--json"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    // Typed round-trip: parse, re-serialize, byte-identical.
    let text = stdout_of(&first);
    let row: BoundsReport = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&row).unwrap();
    assert_eq!(text.trim_end(), again);
}

#[test]
fn zero_tolerance_can_come_from_the_environment() {
    let out = copface_with_env(&["bounds", "--n", "5", "--json"], "COPFACE_TOL_ZERO", "1e-10");
    assert!(out.status.success());
    let row: BoundsReport = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(row.upper_bound_constructed, 5);

    let bad = copface_with_env(&["bounds", "--n", "5"], "COPFACE_TOL_ZERO", "not-a-number");
    assert_eq!(bad.status.code(), Some(4));

    // An explicit flag wins over a broken environment value.
    let flagged = copface_with_env(
        &["bounds", "--n", "5", "--json", "--tol-zero", "1e-9"],
        "COPFACE_TOL_ZERO",
        "not-a-number",
    );
    assert!(flagged.status.success());
}

#[test]
fn out_of_range_tolerances_are_rejected() {
    let out = copface(&["zeros", "--tol-zero", "2.0", "/tmp/irrelevant.txt"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("tolerance"));
}

#[test]
fn facedim_of_the_circulant_reports_dimension_five() {
    let path = temp_path("c5-facedim.txt");
    copface(&["hildebrand", "--n", "5", "--out", path.to_str().unwrap()]);
    let out = copface(&["facedim", path.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["dimension"], 5);
    assert_eq!(report["maximal"], false);
    std::fs::remove_file(&path).ok();
}

#[test]
fn graph_of_the_lifted_matrix_has_exactly_the_segment_edges() {
    let base = temp_path("c5-for-graph.txt");
    let lifted = temp_path("b6-for-graph.txt");
    copface(&["hildebrand", "--n", "5", "--out", base.to_str().unwrap()]);
    copface(&[
        "lift",
        base.to_str().unwrap(),
        "--index-set",
        "1",
        "--out",
        lifted.to_str().unwrap(),
    ]);
    let out = copface(&["graph", lifted.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["vertices"], 8);
    assert_eq!(report["edges"].as_array().unwrap().len(), 3);
    std::fs::remove_file(&base).ok();
    std::fs::remove_file(&lifted).ok();
}
