use std::process::{Command, Output};

use serde_json::Value;

fn fekete(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fekete"))
        .args(args)
        .env_remove("FEKETE_MAX_ENUM_DIM")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = fekete(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    fekete(args).status.code().unwrap()
}

#[test]
fn cube_points_d3() {
    let v = json(&["points", "--domain", "cube", "--dim", "3"]);
    assert_eq!(v["field"], "real");
    assert_eq!(v["n_points"], 4);
    let pts: Vec<Vec<f64>> = serde_json::from_value(v["points"].clone()).unwrap();
    assert_eq!(
        pts,
        vec![
            vec![1.0, 1.0, 1.0],
            vec![-1.0, 1.0, -1.0],
            vec![1.0, -1.0, -1.0],
            vec![-1.0, -1.0, 1.0],
        ]
    );
}

#[test]
fn ball_points_d1() {
    let v = json(&["points", "--domain", "ball", "--dim", "1"]);
    let pts: Vec<Vec<f64>> = serde_json::from_value(v["points"].clone()).unwrap();
    assert_eq!(pts, vec![vec![-1.0], vec![1.0]]);
}

#[test]
fn torus_points_are_unimodular() {
    let v = json(&["points", "--domain", "torus", "--dim", "8"]);
    assert_eq!(v["field"], "complex");
    let pts: Vec<Vec<[f64; 2]>> = serde_json::from_value(v["points"].clone()).unwrap();
    assert_eq!(pts.len(), 9);
    for z in pts.iter().flatten() {
        assert!((z[0].hypot(z[1]) - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn lebesgue_examples() {
    let v = json(&["lebesgue", "--domain", "ball", "--dim", "2", "--method", "exact"]);
    assert!((v["value"].as_f64().unwrap() - 5.0 / 3.0).abs() <= 1e-12);
    let v = json(&["lebesgue", "--domain", "cube", "--dim", "3", "--method", "enumerate"]);
    assert_eq!(v["value"].as_f64().unwrap(), 2.0);
    let v = json(&["lebesgue", "--domain", "simplex", "--dim", "40", "--method", "sample", "--samples", "1000"]);
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    let v = json(&["lebesgue", "--domain", "torus", "--m", "3", "--method", "witness"]);
    assert!((v["value"].as_f64().unwrap() - 3.0).abs() <= 1e-9);
    assert_eq!(v["d"], 8);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&["verify", "--domain", "ball", "--dim", "0"]), 2);
    assert_eq!(code(&["points", "--domain", "cube", "--dim", "8"]), 2);
    assert_eq!(code(&["lebesgue", "--domain", "ball", "--dim", "3", "--method", "witness"]), 2);
    assert_eq!(code(&["lebesgue", "--domain", "simplex", "--dim", "3", "--method", "exact"]), 2);
    assert_eq!(code(&["lebesgue", "--domain", "cube", "--m", "3", "--method", "witness"]), 2);
    assert_eq!(code(&["hadamard", "--order", "12"]), 2);
    assert_eq!(code(&["witness", "--domain", "ball", "--m", "2"]), 2);
}

#[test]
fn cube_dimension_message_names_valid_orders() {
    let out = fekete(&["points", "--domain", "cube", "--dim", "8"]);
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("1, 3, 7"), "{msg}");
}

#[test]
fn enumeration_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_fekete"))
        .args(["lebesgue", "--domain", "ball", "--dim", "6", "--method", "enumerate"])
        .env("FEKETE_MAX_ENUM_DIM", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_fekete"))
        .args(["lebesgue", "--domain", "ball", "--dim", "6", "--method", "enumerate"])
        .env("FEKETE_MAX_ENUM_DIM", "6")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn verify_passes_and_tolerance_override_fails() {
    let v = json(&["verify", "--domain", "ball", "--dim", "64"]);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    assert_eq!(code(&["verify", "--domain", "cube", "--dim", "15"]), 0);
    assert_eq!(code(&["verify", "--domain", "torus", "--dim", "3", "--samples", "2000"]), 0);
    // a residual of exactly zero survives a zero tolerance, a rounding residual does not
    assert_eq!(code(&["verify", "--domain", "ball", "--dim", "5", "--tolerance", "0"]), 1);
}

#[test]
fn sweep_rows() {
    let out = fekete(&["sweep", "--domain", "ball", "--method", "exact", "--dims", "1..10"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("d,lambda,sqrt_d,sqrt_d_plus_1,method,status"));
    let row3: Vec<&str> = lines.nth(2).unwrap().split(',').collect();
    assert_eq!(row3[0], "3");
    assert!((row3[1].parse::<f64>().unwrap() - 2.0).abs() <= 1e-12);

    let out = fekete(&["sweep", "--domain", "simplex", "--method", "sample", "--dims", "1..100", "--samples", "50"]);
    assert!(out.status.success());
    for line in String::from_utf8(out.stdout).unwrap().lines().skip(1) {
        let lambda: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((lambda - 1.0).abs() <= 1e-12, "{line}");
    }
}

#[test]
fn cube_witness_sweep_records_failure() {
    let out = fekete(&["sweep", "--domain", "cube", "--method", "witness", "--ms", "2,3,4"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][1].parse::<f64>().unwrap(), 2.0);
    assert_eq!(rows[1][1], "");
    assert!(rows[1][5].starts_with("error"));
    assert_eq!(rows[2][1].parse::<f64>().unwrap(), 4.0);

    let out = fekete(&["sweep", "--domain", "cube", "--method", "witness", "--ms", "2,4"]);
    assert!(out.status.success());
    let out = fekete(&["sweep", "--domain", "torus", "--method", "witness", "--ms", "2,3,4"]);
    assert!(out.status.success());
}

#[test]
fn hadamard_emit_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h8.json");
    let out = fekete(&["hadamard", "--order", "8", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let report = json(&["hadamard", "--check", path.to_str().unwrap()]);
    assert_eq!(report["valid"], true);
    assert_eq!(report["normalized"], true);

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "1,1\n1,1\n").unwrap();
    let out = fekete(&["hadamard", "--check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["valid"], false);
}

#[test]
fn witness_certificate_shapes() {
    let v = json(&["witness", "--domain", "cube", "--m", "4"]);
    assert_eq!(v["d"], 15);
    assert_eq!(v["epsilon"].as_array().unwrap().len(), 16);
    assert_eq!(v["value"].as_f64().unwrap(), 4.0);
    let v = json(&["witness", "--domain", "torus", "--m", "3"]);
    assert_eq!(v["point"].as_array().unwrap().len(), 8);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let args = ["lebesgue", "--domain", "torus", "--dim", "3", "--method", "sample", "--samples", "500", "--seed", "9"];
    let stdout = fekete(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert!(fekete(&with_out).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}
