//! End-to-end runs of the `geoflow` binary.

use std::f64::consts::PI;
use std::process::{Command, Output};

fn geoflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geoflow")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV, without comment lines and header.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn report(csv: &str, key: &str) -> String {
    let prefix = format!("# {key}: ");
    csv.lines().find_map(|l| l.strip_prefix(&prefix)).unwrap_or_else(|| panic!("no {key} in report")).to_string()
}

fn quantity(csv: &str, name: &str) -> f64 {
    num(&rows(csv).into_iter().find(|r| r[0] == name).unwrap()[1])
}

#[test]
fn laws_octant_and_flat_limit() {
    let out = stdout(&geoflow(&["laws", "--k", "1", "--gamma", "pi/2", "--a", "pi/2", "--b", "pi/2"]));
    assert!(out.starts_with("# config-hash: sha256:"));
    assert!((quantity(&out, "c") - PI / 2.0).abs() < 1e-12);
    assert!((quantity(&out, "alpha") - PI / 2.0).abs() < 1e-7);
    let out = stdout(&geoflow(&["laws", "--k", "1e-9", "--gamma", "pi/3", "--a", "3", "--b", "4"]));
    assert!((quantity(&out, "c") - 13f64.sqrt()).abs() < 1e-6);
}

#[test]
fn laws_reject_a_zero_angle() {
    let out = geoflow(&["laws", "--k", "1", "--gamma", "0", "--a", "1", "--b", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("γ"));
}

#[test]
fn negative_curvature_flags_parse() {
    let out = stdout(&geoflow(&["laws", "--k", "-1", "--gamma", "pi/2", "--a", "0.7", "--b", "1.1"]));
    assert!((quantity(&out, "c").cosh() - 0.7f64.cosh() * 1.1f64.cosh()).abs() < 1e-12);
}

#[test]
fn flow_zero_arclength_echoes_the_base() {
    let out = stdout(&geoflow(&["flow", "--base-l", "0.4", "--base-phi", "0.2", "--lambdas", "0", "--betas", "0,pi/4"]));
    for r in rows(&out) {
        assert_eq!(num(&r[4]), 0.4);
        assert_eq!(num(&r[5]), 0.2);
        assert!((num(&r[6]) - 0.4 * 0.2f64.cos()).abs() < 1e-15);
    }
}

#[test]
fn flow_on_the_unit_sphere_matches_the_exact_law() {
    let out = stdout(&geoflow(&["flow", "--base-l", "0.3", "--betas", "0,pi/6,pi/3,pi/2,2pi/3,5pi/6,pi", "--lambdas", "0.05", "--allow-unsafe-beta"]));
    let data = rows(&out);
    assert_eq!(data.len(), 7);
    for r in data {
        let beta = num(&r[2]);
        // exact spherical cosine law; the angle at the base point is π − β
        let exact = (0.3f64.cos() * 0.05f64.cos() - 0.3f64.sin() * 0.05f64.sin() * beta.cos()).acos();
        assert!((num(&r[4]) - exact).abs() < 1e-5, "β = {beta}: {} vs {exact}", r[4]);
    }
}

fn deflection(field: &[&str], base: &str) -> f64 {
    let mut args = field.to_vec();
    args.extend(["flow", "--base-ls", base, "--betas", "pi/3", "--lambdas", "0.1"]);
    num(&rows(&stdout(&geoflow(&args)))[0][5])
}

#[test]
fn inverse_l_flow_approaches_the_unit_sphere_towards_l_one() {
    let mut gaps = Vec::new();
    for base in ["0.1", "0.3", "0.9"] {
        let flat = deflection(&["--field", "constant", "--field-param", "k=0"], base);
        let sphere = deflection(&["--field", "constant", "--field-param", "k=1"], base);
        let inv = deflection(&["--field", "inverse_l"], base);
        // K = 1/l ≥ 1 inside the unit disc bends geodesics at least as much as the sphere
        assert!(flat < sphere && sphere < inv, "{flat} {sphere} {inv}");
        gaps.push((inv - sphere) / (sphere - flat));
    }
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
}

#[test]
fn triangulate_reference_configuration() {
    let out = stdout(&geoflow(&["triangulate", "--n", "13", "--a", "5", "--c", "3", "--beta", "pi/6"]));
    assert_eq!(report(&out, "closure"), "pass");
    assert!(num(&report(&out, "max_delta_residual")) < 1e-9);
    assert!(num(&report(&out, "diff_b2")).abs() < 1e-10);
    let data = rows(&out);
    assert_eq!(data.len(), 13 * (4 * 13 - 3));
    assert!(data.iter().any(|r| r[2] == "rib") && data.iter().any(|r| r[2] == "top"));
}

#[test]
fn triangulate_flat_field_has_zero_second_order() {
    let out = stdout(&geoflow(&["--field-param", "k=0", "triangulate", "--n", "8"]));
    for key in ["finite_b2", "finite_gamma2", "finite_alpha2"] {
        assert_eq!(num(&report(&out, key)), 0.0);
    }
}

#[test]
fn convergence_table_is_first_order() {
    let out = stdout(&geoflow(&["--field", "wave", "triangulate", "--convergence", "64,128,256"]));
    assert_eq!(rows(&out).len(), 3);
    let order = num(&report(&out, "order_alpha2_n256"));
    assert!((order - 1.0).abs() < 0.3, "{order}");
}

#[test]
fn triangulate_rejects_small_n() {
    assert_eq!(geoflow(&["triangulate", "--n", "3"]).status.code(), Some(2));
}

#[test]
fn metric_and_immerse_emit_tables() {
    let out = stdout(&geoflow(&["--field", "lambert_hill", "metric", "--ls", "0.3,0.6,1"]));
    for r in rows(&out) {
        assert!((num(&r[4]) - num(&r[5])).abs() < 1e-2);
    }
    let out = stdout(&geoflow(&["immerse", "--nr", "4", "--nphi", "3"]));
    let data = rows(&out);
    assert_eq!(data.len(), 15);
    assert!(data.iter().all(|r| num(&r[5]) <= 0.0));
}

#[test]
fn identical_configs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2).map(|i| dir.path().join(format!("run{i}.csv"))).collect();
    for p in &paths {
        let out = geoflow(&["--field", "wave", "--field-param", "kappa=0.7", "flow", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    let (a, b) = (std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
    assert_eq!(a, b);
    // a different configuration changes the hash
    let other = stdout(&geoflow(&["--field", "wave", "--field-param", "kappa=0.8", "flow"]));
    let first = String::from_utf8(a).unwrap();
    assert_ne!(first.lines().next(), other.lines().next());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "field = \"constant\"\nk = 0.0\nn = 6\nformat = \"json\"\n").unwrap();
    let out = stdout(&geoflow(&["--config", cfg.to_str().unwrap(), "triangulate"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["report"]["n"], 6);
    assert_eq!(v["report"]["finite_b2"], 0.0);
    let out = stdout(&geoflow(&["--config", cfg.to_str().unwrap(), "--n", "7", "triangulate"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["report"]["n"], 7);
    std::fs::write(&cfg, "unknown_key = 1\n").unwrap();
    assert_eq!(geoflow(&["--config", cfg.to_str().unwrap(), "laws", "--k", "1", "--gamma", "1", "--b", "1"]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(geoflow(&["--field", "nope", "flow"]).status.code(), Some(2));
    assert_eq!(geoflow(&["--field-param", "kappa=1", "flow"]).status.code(), Some(2));
    assert_eq!(geoflow(&["flow", "--betas", "2"]).status.code(), Some(2));
    assert_eq!(geoflow(&["--tol", "0", "flow"]).status.code(), Some(2));
    assert_eq!(geoflow(&["--field", "lambert_hill", "triangulate"]).status.code(), Some(2));
}

#[test]
fn validate_suites_report_json() {
    for suite in ["flat", "sphere", "integrals", "roundtrip"] {
        let out = geoflow(&["validate", "--suite", suite]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["passed"], true);
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["suite"] == suite));
    }
}
