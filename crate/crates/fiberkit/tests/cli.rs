//! End-to-end checks of the `fiberkit` binary: exit codes, determinism of
//! exports, and the family generate/check round trip.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fiberkit"))
        .args(args)
        .env_remove("FIBERKIT_SEED")
        .output()
        .expect("binary runs")
}

fn path_str(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn classify_reports_components() {
    let out = run(&["classify", "trivial"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Trivial"));
    assert!(text.contains("+1"));

    let out = run(&["classify", "gluck:0,0,1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Nontrivial"));
    assert!(text.contains("-1"));

    let out = run(&["classify", "gluck-concat:(0,0,1);(0,0,-1)"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("Trivial"));
}

#[test]
fn malformed_spec_is_a_usage_error() {
    let out = run(&["classify", "gluck:1,2"]);
    assert_eq!(out.status.code(), Some(64));
    let out = run(&["classify", "spin:0,0,1"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn unknown_subcommand_and_suite_are_usage_errors() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(64));
    let out = run(&["verify", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn coarse_resolution_is_a_numeric_error() {
    let out = run(&["classify", "gluck:0,0,1", "--resolution", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fiber_export_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = path_str(&dir, "a.obj");
    let b = path_str(&dir, "b.obj");
    for out in [&a, &b] {
        let res = run(&[
            "fiber-export",
            "gluck:0,0,1",
            "--out",
            out,
            "--y-grid",
            "3x4",
            "--fiber-res",
            "32",
        ]);
        assert!(res.status.success());
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, bytes_b);

    let text = String::from_utf8(bytes_a).unwrap();
    assert!(text.lines().any(|l| l.starts_with("v ")));
    assert!(text.lines().any(|l| l.starts_with("l ")));
    // embedded vertices live in the radial shell [1, 2)
    for line in text.lines().filter(|l| l.starts_with("v ")) {
        let coords: Vec<f64> = line
            .split_whitespace()
            .skip(1)
            .map(|s| s.parse().unwrap())
            .collect();
        let norm = (coords[0].powi(2) + coords[1].powi(2) + coords[2].powi(2)).sqrt();
        assert!((1.0 - 1e-6..2.0).contains(&norm), "|v| = {norm}");
    }
}

#[test]
fn fiber_export_json_format() {
    let dir = TempDir::new().unwrap();
    let out_path = path_str(&dir, "scene.json");
    let res = run(&[
        "fiber-export",
        "trivial",
        "--out",
        &out_path,
        "--y-grid",
        "2x3",
        "--fiber-res",
        "8",
    ]);
    assert!(res.status.success());
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    // 2x3 grid collapses to the two poles plus one ring of three
    assert_eq!(parsed["curves"].as_array().unwrap().len(), 5);
}

#[test]
fn family_round_trips_through_check() {
    let dir = TempDir::new().unwrap();
    let out_path = path_str(&dir, "family.json");
    let res = run(&[
        "family",
        "N",
        "--out",
        &out_path,
        "--grid",
        "4x6",
        "--resolution",
        "32",
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    assert!(String::from_utf8(res.stdout).unwrap().contains("20"));
    assert!(Path::new(&out_path).exists());

    let res = run(&["family", "N", "--out", &out_path, "--check", &out_path]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));

    // corrupting a recorded component must fail the re-check
    let text = std::fs::read_to_string(&out_path)
        .unwrap()
        .replacen("Nontrivial", "Trivial", 1);
    std::fs::write(&out_path, text).unwrap();
    let res = run(&["family", "N", "--out", &out_path, "--check", &out_path]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn verify_suites_pass_and_honor_seed_env() {
    let res = run(&["verify", "group-axioms", "--seed", "7", "--trials", "5"]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stdout));

    let with_env = Command::new(env!("CARGO_BIN_EXE_fiberkit"))
        .args(["verify", "classifier-oracle", "--trials", "5"])
        .env("FIBERKIT_SEED", "7")
        .output()
        .unwrap();
    let with_flag = run(&["verify", "classifier-oracle", "--seed", "7", "--trials", "5"]);
    assert!(with_env.status.success());
    assert_eq!(with_env.stdout, with_flag.stdout);
}

#[test]
fn verify_all_runs_every_suite() {
    let res = run(&["verify", "all", "--seed", "3", "--trials", "5"]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stdout));
    let text = String::from_utf8(res.stdout).unwrap();
    for name in [
        "group-axioms",
        "trivialization",
        "phi",
        "aut-characterization",
        "classifier-oracle",
        "james",
        "nullhomotopy",
    ] {
        assert!(text.contains(name), "missing {name} in:\n{text}");
    }
}
