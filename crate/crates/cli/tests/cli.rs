use std::f64::consts::PI;
use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn sphx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphx")).args(args).env_remove("SPHX_SEED").output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn polygon_file(vertices: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{{\"vertices\": {vertices}}}").unwrap();
    f
}

const FAST_VERIFY: &[&str] = &["verify", "--trials", "50", "--lune-samples", "20", "--narrow-trials", "20"];

#[test]
fn quad_json_has_all_keys() {
    let v = json_of(&sphx(&["quad", "--kappa", "0.5", "--lambda", "0.6", "--json"]));
    for key in ["kappa", "lambda", "mu", "nu", "xi", "residuals"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!((v["mu"].as_f64().unwrap() - 0.423_587_905_018_120_5).abs() < 1e-12);
    assert!(v["residuals"].as_array().unwrap().iter().all(|r| r.as_f64().unwrap() < 1e-12));
}

#[test]
fn phi_and_inverse_round_trip() {
    let delta = format!("{}", 2.0 * PI / 3.0);
    let v = json_of(&sphx(&["phi", "--delta", &delta, "--json"]));
    let phi = v["phi"].as_f64().unwrap();
    assert!((phi - 0.935_929_455_661_326).abs() < 1e-12);
    let back = json_of(&sphx(&["phi", "--inverse", &format!("{phi}"), "--json"]));
    assert!((back["delta"].as_f64().unwrap() - 2.0 * PI / 3.0).abs() < 1e-12);
}

#[test]
fn phi_outside_domain_is_an_error() {
    let out = sphx(&["phi", "--delta", "1.0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn lune_reports_equilateral_triangle() {
    let v = json_of(&sphx(&["lune", "--delta", "2.5", "--samples", "50", "--json"]));
    let side = v["two_phi"].as_f64().unwrap();
    assert!((v["part_ii"]["ij"].as_f64().unwrap() - side).abs() < 1e-9);
    assert!((v["part_i"]["ih"].as_f64().unwrap() - side).abs() < 1e-9);
    assert!(v["part_iii"]["margin"].as_f64().unwrap() >= -1e-9);
}

#[test]
fn diam_and_extreme_on_a_file() {
    // Regular triangle of side 2 phi(2 pi / 3) around the north pole.
    let side: f64 = 2.0 * 0.935_929_455_661_326;
    let r = (2.0 * (side / 2.0).sin() / 3f64.sqrt()).asin();
    let verts: Vec<[f64; 3]> = (0..3)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / 3.0;
            [r.sin() * a.cos(), r.sin() * a.sin(), r.cos()]
        })
        .collect();
    let file = polygon_file(&serde_json::to_string(&verts).unwrap());
    let path = file.path().to_str().unwrap();

    let d = json_of(&sphx(&["diam", "--in", path, "--json"]));
    assert!((d["value"].as_f64().unwrap() - 2.0 * PI / 3.0).abs() < 1e-9);
    assert_eq!(d["attainment"], "vertex-edge");
    assert!(d["theorem2_margin"].as_f64().unwrap().abs() < 1e-9);

    let e = json_of(&sphx(&["extreme", "--in", path, "--json"]));
    assert_eq!(e["extreme_points"].as_array().unwrap().len(), 3);
    assert!((e["diameter"]["value"].as_f64().unwrap() - side).abs() < 1e-12);
}

#[test]
fn hull_flag_accepts_unordered_points() {
    let file = polygon_file(
        r#"[{"lon_deg": 0, "lat_deg": 60}, {"lon_deg": 120, "lat_deg": 60},
            [0, 0, 1], {"lon_deg": 240, "lat_deg": 60}]"#,
    );
    let path = file.path().to_str().unwrap();
    let e = json_of(&sphx(&["extreme", "--in", path, "--hull", "--json"]));
    assert_eq!(e["extreme_points"].as_array().unwrap().len(), 3);
    // Without --hull the interior point makes the vertex list non-convex.
    assert_eq!(sphx(&["extreme", "--in", path]).status.code(), Some(2));
}

#[test]
fn missing_file_is_an_error() {
    assert_eq!(sphx(&["diam", "--in", "/nonexistent/poly.json"]).status.code(), Some(2));
}

#[test]
fn phi_curve_csv_has_header() {
    let out = sphx(&["phi-curve", "--steps", "10", "--csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "delta,phi,two_phi,claim_margin");
    assert_eq!(lines.count(), 10);
}

#[test]
fn tightness_rows_are_tight() {
    let v = json_of(&sphx(&["tightness", "--delta", "2.5", "3.0", "--json"]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert!(row["margin"].as_f64().unwrap().abs() < 1e-6);
        assert_eq!(row["attainment"], "vertex-edge");
    }
}

#[test]
fn small_verify_passes() {
    let out = sphx(FAST_VERIFY);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 13);
}

#[test]
fn verify_csv_and_json_formats() {
    let csv = sphx(&[FAST_VERIFY, &["--csv"]].concat());
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("name,instances,min_margin,pass,worst_case_payload"));
    let v = json_of(&sphx(&[FAST_VERIFY, &["--json"]].concat()));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["pass"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 13);
}

#[test]
fn verify_fails_under_impossible_tolerance() {
    let out = sphx(&[FAST_VERIFY, &["--tol", "1e-30"]].concat());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn zero_trials_is_a_usage_error() {
    assert_eq!(sphx(&["verify", "--trials", "0"]).status.code(), Some(2));
}

#[test]
fn seed_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_sphx"))
        .args(FAST_VERIFY)
        .arg("--json")
        .env("SPHX_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["config"]["seed"], 5);
}
