use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn charblow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charblow")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn read(dir: &Path, file: &str) -> Vec<u8> {
    fs::read(dir.join(file)).unwrap()
}

#[test]
fn zero_preset_runs_to_completion_with_zero_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = charblow(&["run", "--preset", "zero", "--out", dir.path().to_str().unwrap(), "--quiet"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value = serde_json::from_slice(&read(dir.path(), "report.json")).unwrap();
    assert_eq!(r["status"], "COMPLETED");
    assert!(r["T_pred"].is_null());
    assert!(r["error"].is_null());
    assert_eq!(r["max_u"], 0.0);
    let mon = String::from_utf8(read(dir.path(), "monitor.csv")).unwrap();
    assert!(mon.starts_with("t,W,V,U,G,S,J,calW\n"));
    for line in mon.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert!(f[1..5].iter().all(|v| *v == "0"), "{line}");
    }
    let snaps = String::from_utf8(read(dir.path(), "snapshots.csv")).unwrap();
    assert!(snaps.starts_with("t,x,u0,u1,w0,w1\n"));
    for line in snaps.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert!(f[2..].iter().all(|v| *v == "0"), "{line}");
    }
}

#[test]
fn runs_are_bit_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = charblow(&[
            "run",
            "--preset",
            "theorem2-case1",
            "--grid-m",
            "256",
            "--seed",
            "3",
            "--out",
            d.path().to_str().unwrap(),
            "--quiet",
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["report.json", "monitor.csv", "snapshots.csv"] {
        assert_eq!(read(a.path(), f), read(b.path(), f), "{f}");
    }
    let r: serde_json::Value = serde_json::from_slice(&read(a.path(), "report.json")).unwrap();
    assert_eq!(r["seed"], 3);
    assert_eq!(r["grid"]["m"], 256);
    assert_eq!(r["verdict"], "BLOWUP");
}

#[test]
fn empty_sweep_writes_only_the_header() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.json");
    fs::write(
        &cfg,
        r#"{"name": "empty", "base": "theorem1-psystem", "parameter": "data.eps", "values": []}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = charblow(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--quiet"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = String::from_utf8(read(&out, "sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
    assert!(csv.starts_with("eps,s0,theta0,theta1,theta2,W0,W0plus,T_pred,"));
}

#[test]
fn sweep_rows_follow_the_value_order() {
    let dir = tempfile::tempdir().unwrap();
    let o = charblow(&["sweep", "--preset", "sweep-theta-eps", "--out", dir.path().to_str().unwrap(), "--quiet"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = String::from_utf8(read(dir.path(), "sweep.csv")).unwrap();
    let eps: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(eps, vec![0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625]);
    let summary: serde_json::Value = serde_json::from_slice(&read(dir.path(), "summary.json")).unwrap();
    assert!(summary["theta0_slope"].is_number());
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&charblow(&["run", "--preset", "no-such-preset", "--out", out])), 2);
    assert_eq!(code(&charblow(&["run", "--out", out])), 2);

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"name": "x", "system": "burgers"}"#).unwrap();
    assert_eq!(code(&charblow(&["run", "--config", bad.to_str().unwrap(), "--out", out])), 2);

    fs::write(&bad, "not json").unwrap();
    assert_eq!(code(&charblow(&["run", "--config", bad.to_str().unwrap(), "--out", out])), 2);

    let missing = dir.path().join("missing.json");
    assert_eq!(code(&charblow(&["run", "--config", missing.to_str().unwrap(), "--out", out])), 2);
}

#[test]
fn numerical_failures_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("unstable.json");
    // one step of astronomically large size overflows
    fs::write(
        &cfg,
        r#"{
            "name": "unstable",
            "system": "burgers",
            "data": {"kind": "bump", "center": 0.0, "halfwidth": 0.4, "amplitude": -0.5},
            "grid": {"m": 256},
            "t_end": 1e300,
            "cfl": 1e200,
            "blowup_factor": 1e300,
            "solver": {"resolution_cells": 0.0}
        }"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = charblow(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--quiet"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value = serde_json::from_slice(&read(&out, "report.json")).unwrap();
    assert!(r["error"].is_string());
}

#[test]
fn check_passes_on_builtin_systems() {
    for sys in ["p-system", "burgers"] {
        let o = charblow(&["check", "--system", sys, "--states", "20", "--quiet"]);
        assert_eq!(code(&o), 0, "{sys}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(code(&charblow(&["check", "--system", "nope", "--quiet"])), 2);
}

#[test]
fn witness_table_has_one_row_per_inset() {
    let o = charblow(&["witness"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("delta_over_s0,delta,mollifier_eps,x0,A,B,raw_ratio"));
    assert_eq!(lines.count(), 4);
}
