//! End-to-end runs of the `levbound` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levbound"))
        .args(args)
        .env_remove("LEVBOUND_PRECISION")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn bound_attained_case() {
    let v = json(&["bound", "--n", "7", "--ell", "-1", "--s", "0.3333333333", "--k", "2"]);
    assert_eq!(v["schema"], 1);
    let value = v["result"]["value"].as_f64().unwrap();
    assert!((value - 56.0).abs() < 1e-6);
    assert_eq!(v["result"]["status"], "verified");
    assert!(v["result"]["checks"]["weights_positive"]["passed"].as_bool().unwrap());
}

#[test]
fn bound_picks_k_from_window() {
    let v = json(&["bound", "--n", "4", "--ell", "-0.95", "--s", "0.0"]);
    assert_eq!(v["result"]["k"], 1);
    // L_2 at ℓ = -0.95, s = 0 from (1-ℓ)(1-s)/f_0
    assert!((v["result"]["value"].as_f64().unwrap() - 7.8).abs() < 1e-12);
}

#[test]
fn missing_flag_is_usage_error() {
    let out = run(&["bound", "--n", "4", "--ell", "-0.95"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn precondition_failure_exits_2() {
    let out = run(&["bound", "--n", "4", "--ell", "-0.95", "--s", "0.1", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("window"), "{err}");
}

#[test]
fn precision_is_validated() {
    assert_eq!(run(&["--precision", "20", "u4", "--n", "7", "--ell", "-1", "--s", "0.3"]).status.code(), Some(2));
    let v = json(&["--precision", "30", "u4", "--n", "7", "--ell", "-1", "--s", "0.3"]);
    assert_eq!(v["precision_digits"], 30);
}

#[test]
fn krein_examples() {
    let v = json(&["krein", "--n", "4", "--k", "7", "--ell", "-0.95"]);
    assert_eq!(v["result"]["overall"], true);
    let v = json(&["krein", "--n", "4", "--k", "8", "--ell", "-0.95"]);
    assert_eq!(v["result"]["overall"], false);
    let v = json(&["krein", "--n", "6", "--k", "5", "--sweep"]);
    assert!((v["result"]["value_truncated"].as_f64().unwrap() + 0.853).abs() < 1e-12);
    let v = json(&["krein", "--n", "5", "--k", "3", "--ell", "-0.9", "--pairs", "weak"]);
    assert_eq!(v["result"]["mode"], "weak");
}

#[test]
fn krein_scan_reports_samples() {
    let v = json(&["krein", "--n", "3", "--k", "1", "--scan", "10"]);
    assert_eq!(v["result"]["samples"].as_array().unwrap().len(), 10);
    assert_eq!(v["result"]["all_pass"], true);
}

#[test]
fn energy_attained_configuration() {
    let v = json(&["energy", "--n", "7", "--M", "56", "--ell", "-1", "--potential", "riesz:1"]);
    let nodes: Vec<f64> = v["result"]["nodes"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    for (a, b) in nodes.iter().zip([-1.0, -1.0 / 3.0, 1.0 / 3.0]) {
        assert!((a - b).abs() < 1e-12);
    }
    let v = json(&["energy", "--n", "7", "--M", "56", "--ell", "-1", "--potential", "poly:1"]);
    assert_eq!(v["result"]["value"].as_f64().unwrap(), 56.0 * 55.0);
}

#[test]
fn energy_out_of_range_lists_ranges() {
    let out = run(&["energy", "--n", "4", "--M", "10", "--ell", "-0.9", "--potential", "gaussian:1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k=2"));
    let v = json(&["energy", "--n", "4", "--M", "16", "--ell", "-0.9", "--potential", "gaussian:1"]);
    assert_eq!(v["result"]["status"], "verified");
}

#[test]
fn energy_ladder_csv() {
    let out = run(&["--format", "csv", "energy", "--n", "5", "--M", "22,24,26", "--ell", "-0.9", "--potential", "log"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "M,k,s,bound,status");
    assert_eq!(lines.len(), 4);
}

#[test]
fn table_file_potential() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.txt");
    let mut body = String::new();
    for i in 0..=400 {
        let t = -1.0 + 1.99 * i as f64 / 400.0;
        body.push_str(&format!("{t} {} {}\n", (2.0 * t - 2.0).exp(), 2.0 * (2.0 * t - 2.0).exp()));
    }
    std::fs::write(&path, body).unwrap();
    let spec = format!("file:{}", path.display());
    let v = json(&["energy", "--n", "7", "--M", "56", "--ell", "-1", "--potential", &spec]);
    let w = json(&["energy", "--n", "7", "--M", "56", "--ell", "-1", "--potential", "gaussian:1"]);
    let (a, b) = (v["result"]["value"].as_f64().unwrap(), w["result"]["value"].as_f64().unwrap());
    assert!((a - b).abs() < 1e-3 * b);
    assert_eq!(v["result"]["derivative_approximated"], false);
}

#[test]
fn table_cells_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let out = run(&[
        "--format", "csv", "--output", csv.to_str().unwrap(), "table",
        "--n-min", "7", "--n-max", "8", "--k-min", "2", "--k-max", "4",
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("label,n,k4,k3,k2\n"));
    assert!(text.contains("ell_star,8,-0.758,"));
    assert!(text.contains("ratio_root,7,-0.755,-0.670,-0.526"));
    let side: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("t.json")).unwrap()).unwrap();
    assert_eq!(side["schema"], 1);
    assert_eq!(side["result"]["cells"].as_array().unwrap().len(), 6);
}

#[test]
fn figure_columns_and_determinism() {
    let args = ["--format", "csv", "figure", "--n", "4", "--ell", "-0.95", "--points", "21"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "s,L1,L3,L5,L7,L2,L4,L6,L8");
    assert_eq!(text.lines().count(), 22);
    let v = json(&["figure", "--n", "4", "--ell", "-0.95", "--points", "5"]);
    let s1 = v["result"]["crossovers"][0]["s"].as_f64().unwrap();
    assert!((s1 - 0.0175).abs() < 0.002);
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_levbound"))
        .args(["u4", "--n", "7", "--ell", "-1", "--s", "0.3"])
        .env("LEVBOUND_PRECISION", "30")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["precision_digits"], 30);
}

#[test]
fn certificate_dump_carries_families() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let out = run(&[
        "bound", "--n", "7", "--ell", "-1", "--s", "0.3333333333", "--k", "2",
        "--dump-certificate", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let result = &cert["result"];
    for field in ["n", "kind", "params", "a", "b", "c", "r", "eta", "zeros"] {
        assert!(!result["signed_family"]["family"][field].is_null(), "{field}");
        assert!(!result["adjacent_family"][field].is_null(), "{field}");
    }
    let beta = result["kernel"]["betas"][0].as_f64().unwrap();
    assert!((beta + 1.0 / 3.0).abs() < 1e-9);
    assert_eq!(result["report"]["k"], 2);
}
