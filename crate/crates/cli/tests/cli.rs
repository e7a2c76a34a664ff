use std::collections::HashMap;
use std::fs;
use std::process::{Command, Output};

const HEADER: &str = "x,delta_F,delta_D,cost,discord,weak_discord,fidelity,theta_opt,phi_opt";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weak-discord"))
        .args(args)
        .env_remove("WEAK_DISCORD_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn key_values(o: &Output) -> HashMap<String, String> {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    stdout(o)
        .lines()
        .filter_map(|l| l.split_once(": "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn num(kv: &HashMap<String, String>, key: &str) -> f64 {
    kv[key].parse().unwrap_or_else(|_| panic!("{key} = {}", kv[key]))
}

#[test]
fn compute_werner_cost_is_sum() {
    let kv = key_values(&run(&["compute", "--state", "werner:z=0.25", "--x", "1.0"]));
    assert_eq!(kv["state"], "werner:z=0.25");
    let (c, f, d) = (num(&kv, "cost"), num(&kv, "delta_fidelity"), num(&kv, "delta_discord"));
    assert!((c - (f + d)).abs() <= 1e-12);
}

#[test]
fn compute_product_state_has_no_discord() {
    let kv = key_values(&run(&["compute", "--state", "pure:lambda0=1", "--x", "2"]));
    assert!(num(&kv, "discord").abs() < 1e-9);
    assert!(num(&kv, "delta_discord").abs() < 1e-9);
}

#[test]
fn compute_bell_at_zero_strength() {
    let kv = key_values(&run(&["compute", "--state", "pure:lambda0=0.5", "--x", "0"]));
    assert!((num(&kv, "cost") - 1.0).abs() < 1e-9);
    assert!((num(&kv, "classical_correlation") - 1.0).abs() < 1e-9);
}

#[test]
fn compute_json_and_literal_rule() {
    let o = run(&[
        "compute",
        "--state",
        "pure:lambda0=0.2",
        "--x",
        "0",
        "--literal-postmeasure",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["post_measurement_rule"], "literal");
    assert!((v["post_measurement_trace"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn compute_basis_override() {
    let kv = key_values(&run(&[
        "compute",
        "--state",
        "pure:lambda0=0.2",
        "--x",
        "1",
        "--theta",
        "0.3",
        "--phi",
        "-1",
    ]));
    assert_eq!(kv["channel_basis"], "user_supplied");
    assert_eq!(num(&kv, "channel_theta"), 0.3);
}

#[test]
fn sweep_rows_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let o = run(&[
        "sweep",
        "--state",
        "general:a=0.01,0.1,0.22;b=0.1,0.03,0.5;c=0.1,0.02,0.2",
        "--x-max",
        "4",
        "--steps",
        "17",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), HEADER);
    let mut reader = csv::Reader::from_path(&path).unwrap();
    let mut rows = 0;
    for record in reader.records() {
        let v: Vec<f64> = record.unwrap().iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(v.len(), 9);
        assert!((v[3] - (v[1] + v[2])).abs() <= 1e-12, "row {rows}: {v:?}");
        rows += 1;
    }
    assert_eq!(rows, 17);
}

#[test]
fn sweep_column_selection() {
    let o = run(&[
        "sweep",
        "--state",
        "werner:z=0.5",
        "--steps",
        "3",
        "--columns",
        "x,cost",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x,cost");
    assert_eq!(lines.len(), 4);
    assert_eq!(
        run(&["sweep", "--state", "werner:z=0.5", "--columns", "x,nope"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let args = ["sweep", "--state", "pure:lambda0=0.1", "--x-max", "3", "--steps", "13"];
    let one = Command::new(env!("CARGO_BIN_EXE_weak-discord"))
        .args(args)
        .env("WEAK_DISCORD_THREADS", "1")
        .output()
        .unwrap();
    let two = Command::new(env!("CARGO_BIN_EXE_weak-discord"))
        .args(args)
        .env("WEAK_DISCORD_THREADS", "3")
        .output()
        .unwrap();
    assert!(one.status.success() && two.status.success());
    assert_eq!(one.stdout, two.stdout);
    assert_eq!(one.stdout, run(&args).stdout);
}

#[test]
fn bad_thread_count_is_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_weak-discord"))
        .args(["compute", "--state", "werner:z=0.1", "--x", "1"])
        .env("WEAK_DISCORD_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn figure_files_are_byte_identical_across_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let o = run(&["figure", "fig3", "--out-dir", d.path().to_str().unwrap()]);
        assert!(o.status.success());
        assert!(stdout(&o).trim_end().ends_with("fig3_werner_z_0.25.csv"));
    }
    let fa = fs::read(a.path().join("fig3_werner_z_0.25.csv")).unwrap();
    let fb = fs::read(b.path().join("fig3_werner_z_0.25.csv")).unwrap();
    assert_eq!(fa, fb);
    assert_eq!(String::from_utf8(fa).unwrap().lines().count(), 242);
}

#[test]
fn optimize_reports_interior_and_boundary_minima() {
    let kv = key_values(&run(&["optimize", "--state", "pure:lambda0=0.05"]));
    assert_eq!(kv["boundary"], "none");
    assert!(num(&kv, "x_star") > 0.5 && num(&kv, "curvature") > 0.0);

    let kv = key_values(&run(&["optimize", "--state", "pure:lambda0=1"]));
    assert_eq!(kv["boundary"], "lower");
    assert_eq!(num(&kv, "x_star"), 0.0);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code();
    let o = run(&["compute", "--state", "werner:z=abc", "--x", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 10"));
    assert_eq!(code(&["compute", "--state", "bell", "--x", "1"]), Some(2));
    assert_eq!(code(&["compute", "--state", "pure:lambda0=0.2", "--x", "-1"]), Some(2));
    assert_eq!(code(&["compute", "--state", "pure:lambda0=1.5", "--x", "1"]), Some(3));
    assert_eq!(
        code(&["compute", "--state", "general:a=1,1,1;b=0,0,0;c=0,0,0", "--x", "1"]),
        Some(3)
    );
    assert_eq!(
        code(&["sweep", "--state", "werner:z=0.2", "--x-min", "2", "--x-max", "1"]),
        Some(2)
    );
    assert_eq!(code(&["sweep", "--state", "werner:z=0.2", "--steps", "1"]), Some(2));
    assert_eq!(code(&["figure", "fig9"]), Some(2));
    assert_eq!(code(&["optimize", "--state", "werner:z=0.2", "--tol", "0"]), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no/such/dir/out.csv");
    let o = run(&[
        "sweep",
        "--state",
        "werner:z=0.2",
        "--steps",
        "2",
        "--out",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}
