use std::fs;
use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_multilag"))
        .args(args)
        .output()
        .expect("binary should run");
    let code = out.status.code().expect("no exit code");
    let stdout = String::from_utf8(out.stdout).expect("stdout is UTF-8");
    (code, stdout)
}

fn json(stdout: &str) -> Value {
    serde_json::from_str(stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {stdout}"))
}

fn check_value(report: &Value, name: &str) -> f64 {
    report["checks"]
        .as_array()
        .expect("checks array")
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check named {name}"))["value"]
        .as_f64()
        .expect("numeric value")
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn eom_suite_passes_for_the_multiplicative_family() {
    let (code, out) = run(&[
        "verify",
        "eom",
        "--family",
        "mult-nr",
        "--lambda",
        "1",
        "--potential",
        "harmonic:m=1,omega=1",
        "--grid",
        "21",
    ]);
    assert_eq!(code, 0, "stdout: {out}");
    let report = json(&out);
    assert_eq!(report["suite"], "verify eom");
    assert_eq!(report["pass"], true);
    assert!(check_value(&report, "max_abs_residual") < 1e-9);
    assert_eq!(check_value(&report, "grid_points"), 441.0);
}

#[test]
fn eom_suite_counts_degenerate_grid_points() {
    let (code, out) = run(&[
        "verify",
        "eom",
        "--family",
        "hier-nr",
        "--j",
        "2",
        "--potential",
        "harmonic:m=1,omega=1",
        "--grid",
        "21",
    ]);
    assert_eq!(code, 0);
    let report = json(&out);
    assert_eq!(report["pass"], true);
    assert_eq!(check_value(&report, "degenerate_points_skipped"), 1.0);
}

#[test]
fn lax_suite_reports_the_pinned_trace() {
    let (code, out) = run(&[
        "verify", "lax", "--omega", "1", "--l", "2", "--x", "1", "--p", "1",
    ]);
    assert_eq!(code, 0);
    let report = json(&out);
    assert_eq!(check_value(&report, "trace"), 8.0);
    assert_eq!(check_value(&report, "expected"), 8.0);
    assert_eq!(report["pass"], true);
}

#[test]
fn every_verify_suite_passes_with_defaults() {
    for suite in ["legendre", "limits", "hierarchy", "lax", "twobody"] {
        let (code, out) = run(&["verify", suite]);
        assert_eq!(code, 0, "suite {suite}: {out}");
        assert_eq!(json(&out)["pass"], true, "suite {suite}");
    }
}

#[test]
fn hierarchy_table_degree_three_is_exact() {
    let (code, out) = run(&["hierarchy", "table", "--j", "3"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines,
        vec!["k,numerator,denominator", "0,1,5", "1,1,1", "2,3,1", "3,-1,1"]
    );
}

#[test]
fn hierarchy_table_rejects_degrees_past_the_rational_range() {
    let (code, out) = run(&["hierarchy", "table", "--j", "25"]);
    assert_eq!(code, 2);
    let err = json(&out);
    assert!(err["error"].as_str().unwrap().contains("25"), "{out}");
}

#[test]
fn hierarchy_reconstruction_residuals_decay() {
    let (code, out) = run(&["hierarchy", "reconstruct", "--J", "12"]);
    assert_eq!(code, 0);
    let report = json(&out);
    assert_eq!(report["pass"], true);
    let residuals: Vec<f64> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["name"].as_str().unwrap().starts_with("rel_residual_j"))
        .map(|c| c["value"].as_f64().unwrap())
        .collect();
    assert_eq!(residuals.len(), 12);
    assert!(residuals[0] > residuals[11]);
    assert!(residuals[11] < 1e-8);
    assert_eq!(check_value(&report, "decay_violations"), 0.0);
}

#[test]
fn integrate_closes_a_full_oscillator_period() {
    let csv = scratch("period.csv");
    let (code, out) = run(&[
        "integrate",
        "--family",
        "add-nr",
        "--potential",
        "harmonic:m=1,omega=1",
        "--dt",
        "0.0009998703626682603",
        "--steps",
        "6284",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let summary = json(&out);
    assert_eq!(summary["aborted"], false);
    assert_eq!(summary["rows_written"], 6285);

    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,x,v,p,H_std,H_model");
    let last = lines.last().unwrap();
    let x: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!((x - 1.0).abs() < 1e-8, "period closure off: x = {x}");
}

#[test]
fn integrate_reports_zero_drift_for_free_motion() {
    let csv = scratch("free.csv");
    let (code, out) = run(&[
        "integrate",
        "--family",
        "add-nr",
        "--x0",
        "0.3",
        "--v0",
        "0.7",
        "--steps",
        "2000",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let summary = json(&out);
    assert!(summary["conserved_drift"].as_f64().unwrap() < 1e-12);
}

#[test]
fn integrate_keeps_the_partial_run_on_abort() {
    let csv = scratch("abort.csv");
    let (code, out) = run(&[
        "integrate",
        "--family",
        "add-nr",
        "--potential",
        "poly:c4=-1",
        "--x0",
        "2",
        "--steps",
        "1000",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    let summary = json(&out);
    assert_eq!(summary["aborted"], true);
    assert!(summary["abort_reason"].as_str().unwrap().contains("finite"));
    let rows = summary["rows_written"].as_u64().unwrap() as usize;
    assert!(rows > 1 && rows < 1001);

    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), rows + 2, "header + rows + marker");
    assert!(lines.last().unwrap().starts_with("# aborted:"));
}

#[test]
fn two_body_runs_use_the_sector_header() {
    let csv = scratch("pair.csv");
    let (code, _) = run(&[
        "integrate",
        "--family",
        "twobody",
        "--lambda",
        "1.5",
        "--potential",
        "pair-harmonic:g=0.5",
        "--xrel0",
        "0.8",
        "--steps",
        "100",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,X,x,VX,vx,H_model");
}

#[test]
fn unknown_options_are_rejected_with_an_error_object() {
    let (code, out) = run(&["verify", "eom", "--family", "add-nr", "--bogus", "3"]);
    assert_eq!(code, 2);
    let err = json(&out);
    assert!(err["error"].as_str().unwrap().contains("bogus"));
}

#[test]
fn missing_required_options_are_config_errors() {
    for args in [
        vec!["integrate", "--family", "add-nr"],
        vec!["hierarchy", "table"],
        vec!["verify", "eom", "--family", "add-nr"],
        vec!["verify", "eom", "--family", "hier-nr", "--potential", "free"],
        vec![
            "integrate",
            "--family",
            "mult-nr",
            "--out",
            "/tmp/never.csv",
        ],
        vec!["frobnicate"],
    ] {
        let (code, out) = run(&args);
        assert_eq!(code, 2, "args {args:?} gave stdout {out}");
        assert!(json(&out)["error"].is_string(), "args {args:?}");
    }
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let conf = scratch("run.conf");
    let csv = scratch("conf_run.csv");
    fs::write(
        &conf,
        format!(
            "# oscillator run\nfamily = add-nr\npotential = harmonic:m=1,omega=1\n\
             steps = 500\nout = {}\n",
            csv.display()
        ),
    )
    .unwrap();

    let (code, out) = run(&["integrate", "--config", conf.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["rows_written"], 501);

    let (code, out) = run(&[
        "integrate",
        "--config",
        conf.to_str().unwrap(),
        "--steps",
        "200",
    ]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["rows_written"], 201);
}

#[test]
fn report_json_keeps_a_stable_key_order() {
    let (_, out) = run(&["verify", "lax", "--l", "1"]);
    let suite = out.find("\"suite\"").unwrap();
    let checks = out.find("\"checks\"").unwrap();
    let name = out.find("\"name\"").unwrap();
    let value = out.find("\"value\"").unwrap();
    let tolerance = out.find("\"tolerance\"").unwrap();
    let pass = out.find("\"pass\"").unwrap();
    assert!(suite < checks && checks < name && name < value);
    assert!(value < tolerance && tolerance < pass);
}

#[test]
fn repeat_runs_are_byte_identical() {
    let args = |out: &PathBuf| {
        vec![
            "integrate".to_string(),
            "--family".into(),
            "mult-nr".into(),
            "--lambda".into(),
            "1".into(),
            "--potential".into(),
            "harmonic:m=1,omega=1".into(),
            "--dt".into(),
            "1e-3".into(),
            "--steps".into(),
            "400".into(),
            "--out".into(),
            out.display().to_string(),
        ]
    };
    let (a_csv, b_csv) = (scratch("det_a.csv"), scratch("det_b.csv"));
    let a_args = args(&a_csv);
    let b_args = args(&b_csv);
    let (code_a, out_a) = run(&a_args.iter().map(String::as_str).collect::<Vec<_>>());
    let (code_b, out_b) = run(&b_args.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_eq!(fs::read(&a_csv).unwrap(), fs::read(&b_csv).unwrap());

    let mut sa = json(&out_a);
    let mut sb = json(&out_b);
    sa["csv_path"] = Value::Null;
    sb["csv_path"] = Value::Null;
    assert_eq!(sa, sb);

    let (_, first) = run(&["verify", "hierarchy"]);
    let (_, second) = run(&["verify", "hierarchy"]);
    assert_eq!(first, second);
}
