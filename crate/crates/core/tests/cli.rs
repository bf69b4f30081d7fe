//! End-to-end tests of the `symdom` binary: subcommand output, the exit-code
//! contract (0 = checks passed, 1 = mathematical failure, 2 = usage error),
//! and byte-identical reports for identical seeds.

use std::process::{Command, Output};

fn symdom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symdom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn decompose_diagonal_matrix() {
    let out = symdom(&["decompose", "--domain", "I:2,2", "--point", "diag(0.9,0.4)"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["lambdas"][0], 0.9);
    assert_eq!(v["lambdas"][1], 0.4);
    assert_eq!(v["within_tolerance"], true);
}

#[test]
fn decompose_ball_point() {
    let out = symdom(&["decompose", "--domain", "ball:2", "--point", "0.3,0.4"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["lambdas"].as_array().unwrap().len(), 1);
    assert!((v["lambdas"][0].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn decompose_zero_point_is_empty_and_ok() {
    let out = symdom(&["decompose", "--domain", "ball:2", "--point", "0,0"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["lambdas"].as_array().unwrap().len(), 0);
}

#[test]
fn classify_bidisc_points() {
    let out = symdom(&["classify", "--domain", "bidisc", "--point", "1,0.3"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["stratum"], 1);
    assert_eq!(v["shilov"], false);

    let out = symdom(&["classify", "--domain", "bidisc", "--point", "1,1"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["stratum"], 2);
    assert_eq!(v["shilov"], true);
}

#[test]
fn classify_ball_boundary_point_is_shilov() {
    let out = symdom(&["classify", "--domain", "ball:2", "--point", "0.6,0.8"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["stratum"], 1);
    assert_eq!(v["shilov"], true);
    assert_eq!(v["evidence"]["at_max_distance"], true);
}

#[test]
fn scan_bidisc_generic_direction_stays_positive() {
    let out = symdom(&[
        "scan", "--domain", "bidisc", "--w", "0.8,0.7", "--p", "1,1", "--grid", "64", "--csv",
        "/dev/null",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v["min_abs"].as_f64().unwrap() > 0.0);
}

#[test]
fn classify_interior_point_fails_with_explanation() {
    let out = symdom(&["classify", "--domain", "bidisc", "--point", "0.2,0.3"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("boundary"), "stderr: {err}");
}

#[test]
fn scan_emits_csv_and_summary() {
    let out = symdom(&[
        "scan", "--domain", "ball:2", "--w", "0,1", "--p", "1,0", "--grid", "16",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("theta,abs_det_bergman\n"));
    // orthogonal direction: the determinant column is identically 1
    let csv_rows: Vec<&str> = text.lines().skip(1).take(16).collect();
    assert_eq!(csv_rows.len(), 16);
    for row in csv_rows {
        let val: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!((val - 1.0).abs() < 1e-12);
    }
    // the JSON summary follows the CSV
    let json_start = text.find('{').unwrap();
    let v: serde_json::Value = serde_json::from_str(&text[json_start..]).unwrap();
    assert!((v["min_abs"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn scan_degenerate_direction_hits_zero_at_theta_zero() {
    let out = symdom(&[
        "scan", "--domain", "ball:2", "--w", "1,0", "--p", "1,0", "--grid", "64", "--csv",
        "/dev/null",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v["min_abs"].as_f64().unwrap() < 1e-12);
    assert!(v["argmin_theta"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn rigidity_transvection_reaches_linear_limit() {
    let out = symdom(&[
        "rigidity", "--domain", "ball:2", "--map", "transvection:0.3,0.2", "--p", "1,0",
        "--kmax", "120",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "LINEAR_LIMIT");
    assert!(v["rows"].as_array().unwrap().len() == 120);
}

#[test]
fn rigidity_identity_map() {
    let out = symdom(&[
        "rigidity", "--domain", "ball:2", "--map", "id", "--p", "1,0", "--kmax", "40",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "LINEAR_LIMIT");
    // final L is the identity
    let l = v["final_l"].as_array().unwrap();
    assert!((l[0][0][0].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!(l[0][1][0].as_f64().unwrap().abs() < 1e-8);
}

#[test]
fn rigidity_contraction_reports_failure_and_exits_one() {
    let out = symdom(&[
        "rigidity", "--domain", "ball:2", "--map", "scale:0.5", "--p", "1,0", "--kmax", "60",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "FAILED");
}

#[test]
fn usage_errors_exit_two() {
    // unparseable domain
    let out = symdom(&["decompose", "--domain", "V:3", "--point", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // malformed point
    let out = symdom(&["decompose", "--domain", "ball:2", "--point", "1,banana"]);
    assert_eq!(out.status.code(), Some(2));
    // wrong arity
    let out = symdom(&["decompose", "--domain", "ball:2", "--point", "1,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    // unknown chain step
    let out = symdom(&[
        "rigidity", "--domain", "ball:2", "--map", "twist:1", "--p", "1,0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // clap-level: missing required flag
    let out = symdom(&["decompose", "--point", "1,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identical_seeds_give_byte_identical_reports() {
    let run = || {
        symdom(&[
            "rigidity", "--domain", "ball:2", "--map", "transvection:0.2,0.1", "--p", "1,0",
            "--kmax", "30", "--seed", "11",
        ])
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn complex_number_grammar() {
    for point in ["0.5+0.5i,0", "0.5-0.5i,0", "0.7i,0", "i,0"] {
        let out = symdom(&["decompose", "--domain", "ball:2", "--point", point]);
        assert!(
            out.status.success(),
            "failed to parse '{point}': {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}
