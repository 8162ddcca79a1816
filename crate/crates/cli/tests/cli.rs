//! End-to-end tests of the `lpbm` binary: exit-code contract, deterministic
//! output, seed handling, and input-error reporting.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lpbm() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lpbm"))
}

fn write(path: &Path, contents: &str) {
    fs::write(path, contents).unwrap();
}

fn run(cmd: &mut Command) -> Output {
    cmd.env_remove("LPBM_SEED").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn mixed_volume_square_against_ball() {
    let dir = tempfile::tempdir().unwrap();
    let square = dir.path().join("square.json");
    let ball = dir.path().join("ball.json");
    write(
        &square,
        r#"{"type":"polygon","vertices":[[1.0,-1.0],[1.0,1.0],[-1.0,1.0],[-1.0,-1.0]]}"#,
    );
    write(&ball, r#"{"type":"ball","center":[0.0,0.0],"radius":1.0}"#);
    let out = run(lpbm()
        .args(["mixed-volume", "--p", "1"])
        .arg(&square)
        .arg(&ball));
    assert_eq!(code(&out), 0);
    let value: f64 = String::from_utf8(out.stdout)
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((value - 4.0).abs() < 1e-9);
}

#[test]
fn jensen_check_margin_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let dist = dir.path().join("dist.json");
    write(&dist, r#"{"weights":[0.5,0.5],"values":[0.0,2.0]}"#);
    let out = run(lpbm().args(["jensen-check", "--p", "2"]).arg(&dist));
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((report["margin"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((report["c_p"].as_f64().unwrap() - 0.5).abs() < 1e-15);

    // Invalid p is a usage error.
    let out = run(lpbm().args(["jensen-check", "--p", "-1"]).arg(&dist));
    assert_eq!(code(&out), 2);
}

#[test]
fn malformed_json_reports_path_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    write(&bad, r#"{"weights":[0.5,0.5],"values":[0.0,"#);
    let out = run(lpbm().args(["jensen-check", "--p", "2"]).arg(&bad));
    assert_eq!(code(&out), 2);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("bad.json"), "stderr: {stderr}");
}

#[test]
fn nonconvex_body_reports_vertex_triple_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("nonconvex.json");
    write(
        &bad,
        r#"{"type":"polygon","vertices":[[2.0,-1.0],[2.0,1.0],[0.1,0.1],[-2.0,1.0],[-2.0,-1.0]]}"#,
    );
    let ball = dir.path().join("ball.json");
    write(&ball, r#"{"type":"ball","center":[0.0,0.0],"radius":1.0}"#);
    let out = run(lpbm()
        .args(["mixed-volume", "--p", "2"])
        .arg(&bad)
        .arg(&ball));
    assert_eq!(code(&out), 2);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(
        stderr.contains("not convex") && stderr.contains("0.1"),
        "stderr: {stderr}"
    );
}

#[test]
fn verify_theorem1_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = run(lpbm()
            .args([
                "verify-theorem1",
                "--p",
                "2",
                "--instances",
                "100",
                "--seed",
                "7",
                "--output",
            ])
            .arg(path));
        assert_eq!(code(&out), 0);
    }
    let bytes_a = fs::read(&a).unwrap();
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, fs::read(&b).unwrap());
    let text = String::from_utf8(bytes_a).unwrap();
    assert_eq!(text.lines().count(), 101); // header + one row per instance
    assert!(text.starts_with("seed,p,lhs,rhs,margin,asymmetry,sigma,n_dirs\n"));
}

#[test]
fn seed_env_override_changes_output() {
    let out_default = run(lpbm().args(["verify-theorem1", "--instances", "5"]));
    assert_eq!(code(&out_default), 0);
    let out_env = lpbm()
        .args(["verify-theorem1", "--instances", "5"])
        .env("LPBM_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(code(&out_env), 0);
    let out_flag = run(lpbm().args(["verify-theorem1", "--instances", "5", "--seed", "99"]));
    assert_ne!(out_default.stdout, out_env.stdout);
    assert_eq!(out_env.stdout, out_flag.stdout);
}

#[test]
fn inflated_bound_fixture_fails_with_exit_1() {
    // Random pairs sit far inside the bound (its constant is 1/512), so a
    // violation fixture needs a large inflation to drive margins negative.
    let out = run(lpbm().args([
        "verify-theorem1",
        "--p",
        "2",
        "--instances",
        "20",
        "--rhs-scale",
        "1e4",
    ]));
    assert_eq!(code(&out), 1);
}

#[test]
fn verify_theorem2_small_run_passes() {
    let out = run(lpbm().args([
        "verify-theorem2",
        "--p",
        "2",
        "--instances",
        "4",
        "--n-dirs",
        "512",
    ]));
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn proof_chain_on_explicit_bodies() {
    let dir = tempfile::tempdir().unwrap();
    let square = dir.path().join("square.json");
    let ball = dir.path().join("ball.json");
    write(
        &square,
        r#"{"type":"polygon","vertices":[[1.0,-1.0],[1.0,1.0],[-1.0,1.0],[-1.0,-1.0]]}"#,
    );
    write(&ball, r#"{"type":"ball","center":[0.0,0.0],"radius":1.0}"#);
    let out = run(lpbm()
        .args([
            "proof-chain",
            "--p",
            "2",
            "--n-dirs",
            "512",
            "--format",
            "json",
        ])
        .arg(&square)
        .arg(&ball));
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["gamma"].as_f64().unwrap() <= 1.0 + 1e-12);
    assert!(report["steps"]["jensen_step"].as_f64().unwrap() >= -1e-9);

    let out = run(lpbm().args(["proof-chain", "--p", "2"]).arg(&square));
    assert_eq!(code(&out), 2); // one body without the other
}

#[test]
fn proof_chain_suite_csv_shape() {
    let out = run(lpbm().args(["proof-chain", "--instances", "10", "--seed", "3"]));
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 11);
    assert!(text.starts_with("seed,p,gamma,gamma_p,delta_p,vol_k1,vol_k2,"));
}

#[test]
fn sharpness_scan_emits_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let summary = dir.path().join("summary.json");
    let out = run(lpbm()
        .args(["sharpness-scan", "--n", "2", "--p", "2", "--output"])
        .arg(&csv)
        .arg("--summary")
        .arg(&summary));
    assert_eq!(code(&out), 0);

    let rows = fs::read_to_string(&csv).unwrap();
    assert!(rows.starts_with("n,p,epsilon,delta_p,asymmetry,asymmetry_sq,beta_p\n"));
    assert_eq!(rows.lines().count(), 18); // header + 17 grid points
    assert!(rows.lines().nth(1).unwrap().ends_with(',')); // beta column empty

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&summary).unwrap()).unwrap();
    let slope = summary["fitted_slopes"]["delta_p"].as_f64().unwrap();
    assert!((slope - 2.0).abs() <= 0.05, "slope {slope}");
    let ratio = summary["ratio_limits"]["asym_over_eps"].as_f64().unwrap();
    assert!((ratio - 4.0 / std::f64::consts::PI).abs() <= 0.03);
}

#[test]
fn float_output_parses_back_to_full_precision() {
    let out = run(lpbm().args(["verify-theorem1", "--instances", "3", "--seed", "11"]));
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 8);
        let lhs: f64 = fields[2].parse().unwrap();
        let margin: f64 = fields[4].parse().unwrap();
        assert!(margin.is_finite() && lhs.is_finite());
    }
}
