//! Black-box behaviour of the `twistor-gh` binary: exit codes, output
//! formats, and input validation.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistor-gh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("classify"), "help lists subcommands");
}

#[test]
fn unknown_metric_exits_one_with_message() {
    let out = run(&["classify", "--metric", "nope", "--fibermap", "id"]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("error:"), "stderr: {err}");
}

#[test]
fn malformed_params_json_exits_one() {
    let out = run(&[
        "classify",
        "--metric",
        "round_sphere",
        "--params",
        "{radius: 2}",
        "--fibermap",
        "id",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn unknown_output_format_exits_one() {
    let out = run(&["classify", "--metric", "flat", "--fibermap", "id", "--output", "xml"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn nonpositive_t_exits_one() {
    let out = run(&["classify", "--metric", "flat", "--fibermap", "id", "--t", "-1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn undersized_grid_exits_one() {
    let out = run(&[
        "classify",
        "--metric",
        "flat",
        "--fibermap",
        "id",
        "--points",
        "1",
        "--fiber-points",
        "2",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn ambiguous_tolerance_band_exits_two() {
    // flat + antipodal has residuals near 2.8; tol 0.5 puts them inside the
    // (tol, 10·tol] band, which must be refused rather than guessed.
    let out = run(&[
        "classify",
        "--metric",
        "flat",
        "--fibermap",
        "antipodal",
        "--tol",
        "0.5",
    ]);
    assert_eq!(code(&out), 2, "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn classify_json_has_schema_and_class() {
    let out = run(&[
        "classify",
        "--metric",
        "flat",
        "--fibermap",
        "omega",
        "--t",
        "1",
        "--no-timestamp",
        "--output",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "twistor-gh/1");
    assert_eq!(v["class"], "K");
    assert_eq!(v["pattern"], "0000");
    assert!(v.get("timestamp").is_none() || v["timestamp"].is_null());
}

#[test]
fn classify_csv_has_expected_header() {
    let out = run(&[
        "classify",
        "--metric",
        "flat",
        "--fibermap",
        "omega",
        "--no-timestamp",
        "--output",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let header = text.lines().next().unwrap();
    for col in ["metric", "fibermap", "t", "class", "pattern", "r_total", "r_g2_n"] {
        assert!(header.split(',').any(|c| c == col), "missing column {col}");
    }
    assert_eq!(text.lines().count(), 2, "one header and one data row");
}

#[test]
fn multiple_t_values_emit_one_row_each() {
    let out = run(&[
        "classify",
        "--metric",
        "flat",
        "--fibermap",
        "omega",
        "--t",
        "0.5",
        "--t",
        "2",
        "--no-timestamp",
        "--output",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3, "header plus two rows:\n{text}");
}

#[test]
fn quick_verify_passes_on_flat_identity() {
    let out = run(&[
        "verify",
        "--metric",
        "flat",
        "--fibermap",
        "id",
        "--t",
        "1",
        "--points",
        "2",
        "--fiber-points",
        "4",
        "--output",
        "json",
        "--no-timestamp",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_pass"], true);
    assert!(v["suites"].as_array().unwrap().len() >= 4);
}

#[test]
fn curvature_reports_flat_flags() {
    let out = run(&[
        "curvature",
        "--metric",
        "flat",
        "--no-timestamp",
        "--output",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["einstein"], true);
    assert_eq!(v["self_dual"], true);
    assert_eq!(v["scalar_flat"], true);
    assert_eq!(v["scalar"].as_f64().unwrap(), 0.0);
}

#[test]
fn catalog_lists_all_seven_metrics() {
    let out = run(&["catalog", "--output", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "twistor-gh/1");
    let metrics = v["metrics"].as_array().unwrap();
    assert_eq!(metrics.len(), 7);
    let names: Vec<&str> = metrics.iter().map(|m| m["name"].as_str().unwrap()).collect();
    for want in [
        "flat",
        "round_sphere",
        "conformal_flat",
        "s2xh2",
        "s2xs2",
        "fubini_study",
        "perturbed_flat",
    ] {
        assert!(names.contains(&want), "catalog missing {want}");
    }
}
