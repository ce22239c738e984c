//! End-to-end runs of the compiled binary: output contracts, exit codes,
//! config-file layering, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

static COUNTER: AtomicUsize = AtomicUsize::new(0);

fn temp_path(tag: &str) -> PathBuf {
    let n = COUNTER.fetch_add(1, Ordering::Relaxed);
    std::env::temp_dir().join(format!("qwalk-cli-{}-{n}-{tag}", std::process::id()))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

/// Splits a CSV dump into (metadata lines, header, data rows).
fn split_csv(text: &str) -> (Vec<&str>, &str, Vec<Vec<f64>>) {
    let mut meta = Vec::new();
    let mut header = "";
    let mut rows = Vec::new();
    for line in text.lines() {
        if line.starts_with("# ") {
            meta.push(line);
        } else if header.is_empty() {
            header = line;
        } else {
            rows.push(line.split(',').map(|v| v.parse().expect("numeric cell")).collect());
        }
    }
    (meta, header, rows)
}

#[test]
fn simulate_emits_metadata_header_and_a_unit_mass_distribution() {
    let out = run(&[
        "simulate",
        "--omega",
        "3.14159265",
        "--alpha",
        "0.7071067,0",
        "--beta",
        "0,0.7071067",
        "--steps",
        "40",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    let (meta, header, rows) = split_csv(&text);
    assert!(meta.iter().any(|l| l.starts_with("# command = simulate")));
    assert!(meta.iter().any(|l| l.starts_with("# omega = ")));
    assert!(meta.iter().any(|l| l.starts_with("# steps = 40")));
    assert_eq!(header, "x,mu");
    assert_eq!(rows.len(), 81);
    let total: f64 = rows.iter().map(|r| r[1]).sum();
    assert!((total - 1.0).abs() < 1e-12, "total mass {total}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["simulate", "--omega", "1.2", "--steps", "25"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn out_flag_writes_the_table_to_a_file() {
    let path = temp_path("run.csv");
    let out = run(&[
        "simulate",
        "--omega",
        "0.5",
        "--steps",
        "10",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout_of(&out).is_empty());
    let text = std::fs::read_to_string(&path).expect("output file exists");
    let (_, header, rows) = split_csv(&text);
    assert_eq!(header, "x,mu");
    assert_eq!(rows.len(), 21);
    std::fs::remove_file(&path).ok();
}

#[test]
fn json_format_mirrors_the_table() {
    let out = run(&["simulate", "--omega", "0.3", "--steps", "3", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid JSON");
    assert_eq!(doc["columns"], serde_json::json!(["x", "mu"]));
    assert_eq!(doc["rows"].as_array().unwrap().len(), 7);
    assert_eq!(doc["metadata"]["steps"], "3");
}

#[test]
fn timeavg_comparison_stays_near_the_closed_form() {
    let path = temp_path("avg.csv");
    let out = run(&[
        "timeavg",
        "--omega",
        "3.141592653589793",
        "--T",
        "500",
        "--window",
        "3",
        "--compare-theory",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).starts_with("max |mu_bar - theory| = "));
    let text = std::fs::read_to_string(&path).unwrap();
    let (meta, header, rows) = split_csv(&text);
    assert_eq!(header, "x,mu_bar,theory,abs_diff");
    assert!(meta.iter().any(|l| l.starts_with("# max_abs_diff = ")));
    for row in &rows {
        assert!(row[3] < 5e-3, "x = {} drifted: {}", row[0], row[3]);
    }
    std::fs::remove_file(&path).ok();
}

#[test]
fn sweep_rows_follow_the_grid_order() {
    let out = run(&[
        "sweep",
        "--omega-grid",
        "0.4:3.0:6",
        "--threads",
        "3",
        "--report",
        "localization",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    let (_, header, rows) = split_csv(&text);
    assert_eq!(header, "omega,atom_mass,mu_bar_origin,pole_angle");
    assert_eq!(rows.len(), 6);
    let omegas: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    assert!(omegas.windows(2).all(|w| w[0] < w[1]), "unsorted: {omegas:?}");
    assert!((omegas[0] - 0.4).abs() < 1e-15);
    assert!((omegas[5] - 3.0).abs() < 1e-15);
}

#[test]
fn verify_masspoints_reports_a_passing_json_record() {
    let out = run(&["verify", "--only", "masspoints", "--json"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let records: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let records = records.as_array().unwrap();
    assert!(!records.is_empty());
    for r in records {
        assert_eq!(r["criterion"], 8);
        assert_eq!(r["pass"], true);
        assert!(r["measured"].as_f64().unwrap() <= r["tolerance"].as_f64().unwrap());
    }
}

#[test]
fn verify_with_an_unknown_selection_fails_the_precondition() {
    let out = run(&["verify", "--only", "zzz"]);
    assert_eq!(out.status.code(), Some(2));
    let record: serde_json::Value = serde_json::from_str(stderr_of(&out).trim()).unwrap();
    assert_eq!(record["error"], "precondition");
    assert_eq!(record["field"], "only");
}

#[test]
fn unknown_flags_are_usage_errors() {
    let out = run(&["simulate", "--frobnicate", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_steps_is_a_usage_error_naming_the_field() {
    let out = run(&["simulate", "--omega", "1.0"]);
    assert_eq!(out.status.code(), Some(1));
    let record: serde_json::Value = serde_json::from_str(stderr_of(&out).trim()).unwrap();
    assert_eq!(record["error"], "parse");
    assert_eq!(record["field"], "steps");
}

#[test]
fn a_vanishing_state_is_a_precondition_error_naming_both_amplitudes() {
    let out = run(&[
        "simulate",
        "--alpha",
        "1e-9,0",
        "--beta",
        "0,1e-9",
        "--steps",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let record: serde_json::Value = serde_json::from_str(stderr_of(&out).trim()).unwrap();
    assert_eq!(record["field"], "alpha,beta");
}

#[test]
fn flags_override_the_config_file() {
    let path = temp_path("walk.toml");
    std::fs::write(&path, "omega = 1.0\nsteps = 4\n").unwrap();
    let base = run(&["simulate", "--config", path.to_str().unwrap()]);
    assert!(base.status.success(), "stderr: {}", stderr_of(&base));
    let base_text = stdout_of(&base);
    let (meta, _, rows) = split_csv(&base_text);
    assert!(meta.iter().any(|l| l.starts_with("# steps = 4")));
    assert_eq!(rows.len(), 9);

    let overridden = run(&["simulate", "--config", path.to_str().unwrap(), "--steps", "6"]);
    let over_text = stdout_of(&overridden);
    let (meta, _, rows) = split_csv(&over_text);
    assert!(meta.iter().any(|l| l.starts_with("# steps = 6")));
    assert_eq!(rows.len(), 13);
    std::fs::remove_file(&path).ok();
}

#[test]
fn degree_input_matches_the_radian_run() {
    let radians = run(&["simulate", "--omega", "3.141592653589793", "--steps", "12"]);
    let degrees = run(&["simulate", "--omega", "180", "--omega-degrees", "--steps", "12"]);
    let (_, _, rows_r) = split_csv(&stdout_of(&radians));
    let (_, _, rows_d) = split_csv(&stdout_of(&degrees));
    assert_eq!(rows_r.len(), rows_d.len());
    for (r, d) in rows_r.iter().zip(&rows_d) {
        assert_eq!(r[0], d[0]);
        assert!((r[1] - d[1]).abs() < 1e-12);
    }
}

#[test]
fn a_broken_config_file_is_a_usage_error() {
    let path = temp_path("broken.toml");
    std::fs::write(&path, "omega = \"sideways\"\n").unwrap();
    let out = run(&["simulate", "--config", path.to_str().unwrap(), "--steps", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let record: serde_json::Value = serde_json::from_str(stderr_of(&out).trim()).unwrap();
    assert_eq!(record["field"], "config");
    std::fs::remove_file(&path).ok();
}
