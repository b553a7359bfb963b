use std::io::Write;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wehrl-lab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn carlen_q2_matches_state_independent_value() {
    let out = lab(&["carlen", "--twice-j", "2", "--q", "2", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["lhs"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-9);
    assert_eq!(v["experimental"], false);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["minimize", "--twice-j", "2", "--seed", "42", "--starts", "3", "--format", "csv"];
    let a = lab(&args);
    let b = lab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("start,value"));
    for line in lines {
        let value: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((value - 2.0 / 3.0).abs() < 1e-4, "{line}");
    }
}

#[test]
fn verify_norms_csv_reports_no_violations() {
    let out = lab(&["verify-norms", "--twice-j", "3", "--p", "2.5", "--n-max", "2", "--samples", "30", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "n,q,max_ratio,violations");
    assert_eq!(rows.len(), 3);
    assert!(rows[1..].iter().all(|r| r.ends_with(",0")));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let mut f = std::fs::File::create(&cfg).unwrap();
    writeln!(f, "# carlen run\ntwice-j = 3\nq = 4\nseed = 8").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = json(&lab(&["carlen", "--config", cfg]));
    assert_eq!(from_file["twice_j"], 3);
    assert_eq!(from_file["q"].as_f64(), Some(4.0));

    let overridden = json(&lab(&["carlen", "--config", cfg, "--q", "3"]));
    assert_eq!(overridden["twice_j"], 3);
    assert_eq!(overridden["q"].as_f64(), Some(3.0));
}

#[test]
fn output_file_receives_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bounds.csv");
    let out = lab(&["bounds", "--twice-j", "4", "--format", "csv", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "q = 4\n").unwrap();
    assert_eq!(lab(&["entropy", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(lab(&["carlen", "--bogus", "1"]).status.code(), Some(2));
    assert_eq!(lab(&["entropy", "--twice-j", "0"]).status.code(), Some(2));
    assert_eq!(lab(&["sweep", "--twice-j", "2", "--p", "0.5"]).status.code(), Some(2));
    assert_eq!(lab(&[]).status.code(), Some(2));
}

#[test]
fn ode_scan_finds_one_admissible_value() {
    let out = lab(&["ode", "--twice-j", "2", "--p", "2", "--q", "3", "--u0-range", "0.5,5", "--scan-points", "32"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["admissible_u0"].as_array().map(Vec::len), Some(1));
}
