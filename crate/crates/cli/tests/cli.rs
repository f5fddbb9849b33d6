use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinlogic")).args(args).output().expect("spawn spinlogic")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn rows(csv_text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(csv_text.as_bytes()).records().map(|r| r.unwrap()).collect()
}

fn field(r: &csv::StringRecord, i: usize) -> f64 {
    r[i].parse().unwrap()
}

#[test]
fn toffoli_scan_rows_and_shrinking_gap() {
    let out = ok(&["toffoli-scan", "--m1", "3..20"]);
    let header = out.lines().next().unwrap();
    assert_eq!(header, "m1,omega2_over_rabi,d_pro,leading_bound,relative_gap,average_failure");
    let r = rows(&out);
    assert_eq!(r.len(), 18);
    for w in r.windows(2) {
        assert!(field(&w[1], 4) < field(&w[0], 4));
    }
}

#[test]
fn toffoli_scan_single_row() {
    let r = rows(&ok(&["toffoli-scan", "--m1", "5..5"]));
    assert_eq!(r.len(), 1);
    assert!((field(&r[0], 2) - 2.4e-2).abs() < 1e-3);
}

#[test]
fn empty_range_fails_on_stderr() {
    let out = run(&["toffoli-scan", "--m1", "9..3"]);
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty"));
}

#[test]
fn preset_ion_budget() {
    let v: Value = serde_json::from_str(&ok(&["preset", "run", "ion-toffoli", "--ratios", "250,1000"])).unwrap();
    let s = v["budget"]["systematic"].as_f64().unwrap();
    assert!((s - 0.019).abs() < 0.003, "{s}");
    assert_eq!(v["lab"]["points"].as_array().unwrap().len(), 2);
    assert!(v["lab"]["pass"].as_bool().unwrap());
}

#[test]
fn preset_donor_fredkin_flags_rwa() {
    let v: Value = serde_json::from_str(&ok(&["preset", "run", "donor-fredkin"])).unwrap();
    let rwa = v["budget"]["rwa"].as_f64().unwrap();
    assert!((rwa - 0.22).abs() < 0.005, "{rwa}");
    assert!(v["budget"]["rwa_flagged"].as_bool().unwrap());
}

#[test]
fn unknown_preset_fails() {
    let out = run(&["preset", "run", "bogus"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn ft_grid_is_quadratic_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    let summary = dir.path().join("summary.json");
    let args = |out: &Path| {
        vec![
            "ft".to_string(),
            "--p".into(),
            "1e-3,3e-3,1e-2".into(),
            "--trials".into(),
            "100000".into(),
            "--seed".into(),
            "11".into(),
            "--threshold-trials".into(),
            "20000".into(),
            "--summary".into(),
            summary.to_str().unwrap().into(),
            "--output".into(),
            out.to_str().unwrap().into(),
        ]
    };
    for path in [&csv_a, &csv_b] {
        let a = args(path);
        ok(&a.iter().map(String::as_str).collect::<Vec<_>>());
    }
    let a = std::fs::read(&csv_a).unwrap();
    assert_eq!(a, std::fs::read(&csv_b).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().next().unwrap(), "p,trials,estimate,ci_low,ci_high,seed");
    let r = rows(&text);
    let (e1, e3) = (field(&r[0], 2), field(&r[2], 2));
    // One decade in p.
    let slope = (e3 / e1).log10();
    assert!((slope - 2.0).abs() < 0.3, "{e1} {e3} {slope}");
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    let p_star = s["threshold"]["p_star"].as_f64().unwrap();
    assert!(p_star > 4.2e-3 / 2.0 && p_star < 4.2e-3 * 2.0, "{p_star}");
    assert_eq!(s["counting"]["published_total"].as_f64(), Some(239.0));
    assert_eq!(s["counting"]["derived_total"].as_f64(), Some(237.0));
}

#[test]
fn ft_rejects_invalid_probability() {
    let out = run(&["ft", "--p", "0.7", "--no-threshold"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("0.7"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("scan.csv");
    std::fs::write(&cfg, format!(r#"{{"command": "toffoli-scan", "m1": "3..6", "output": {:?}}}"#, out.to_str().unwrap())).unwrap();
    let stdout = ok(&["--config", cfg.to_str().unwrap(), "toffoli-scan"]);
    assert!(stdout.is_empty());
    assert_eq!(rows(&std::fs::read_to_string(&out).unwrap()).len(), 4);

    ok(&["--config", cfg.to_str().unwrap(), "toffoli-scan", "--m1", "4..5"]);
    let direct = ok(&["toffoli-scan", "--m1", "4..5"]);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), direct);

    let other = dir.path().join("other.csv");
    ok(&["--config", cfg.to_str().unwrap(), "toffoli-scan", "--output", other.to_str().unwrap()]);
    assert_eq!(rows(&std::fs::read_to_string(&other).unwrap()).len(), 4);
}

#[test]
fn config_for_other_command_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"command": "ft", "p": [0.001]}"#).unwrap();
    assert!(!run(&["--config", cfg.to_str().unwrap(), "toffoli-scan", "--m1", "3..4"]).status.success());
    assert!(!run(&["--config", dir.path().join("missing.json").to_str().unwrap(), "ft"]).status.success());
}

#[test]
fn halfadder_csv_and_report() {
    let r = rows(&ok(&["halfadder"]));
    let p = |i: &str, o: &str| r.iter().find(|r| &r[0] == i && &r[1] == o).map(|r| field(r, 2)).unwrap();
    assert!(p("111", "100") >= 0.97);
    assert!(p("100", "101") >= 0.97);
    assert!(p("001", "001") >= 0.97);
    assert!(p("000", "000") >= 0.97);
    let v: Value = serde_json::from_str(&ok(&["halfadder", "--format", "json"])).unwrap();
    assert!(v["truth_table"]["pass"].as_bool().unwrap());
    assert!(v["dephasing_effect"].as_f64().unwrap() < v["systematic_budget"].as_f64().unwrap());
}

#[test]
fn fredkin_scan_and_search() {
    let r = rows(&ok(&["fredkin-scan", "--n", "1..1", "--m", "6..6"]));
    assert!((field(&r[0], 2) - 3f64.sqrt()).abs() < 1e-12);
    assert!(field(&r[0], 4) < 1e-10);
    let v: Value = serde_json::from_str(&ok(&["fredkin-scan", "--target", "1"])).unwrap();
    assert!(v["best_relative_error"].as_f64().unwrap() <= 1e-5);
    assert!(!v["quoted_consistent"].as_bool().unwrap());
}

#[test]
fn rwa_check_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    let frame = dir.path().join("frame.json");
    std::fs::write(
        &spec,
        r#"{"qubits": 1, "ising": [], "heisenberg": [], "z_fields": [100.0],
            "drives": [{"target": 0, "amplitude": 2.0, "carrier": 100.0, "phase": 0.0}]}"#,
    )
    .unwrap();
    std::fs::write(&frame, r#"{"zeeman": [100.0], "hyperfine": [0.0]}"#).unwrap();
    let v: Value = serde_json::from_str(&ok(&["rwa-check", "--spec", spec.to_str().unwrap(), "--frame", frame.to_str().unwrap()])).unwrap();
    assert!(v["complete"].as_bool().unwrap());
    assert!((v["max_bound"].as_f64().unwrap() - 2.0 / 400.0).abs() < 1e-12);
    let v: Value = serde_json::from_str(&ok(&["rwa-check", "--preset", "donor-toffoli"])).unwrap();
    assert!(v["max_bound"].as_f64().unwrap() > 2e-3);
}
