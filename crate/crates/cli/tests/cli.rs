use std::fs;
use std::process::{Command, Output};

use linkop_core::basis::basis_p;
use linkop_core::ShapeParams;

fn linkop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linkop"))
        .args(args)
        .output()
        .expect("run linkop")
}

fn csv_rows(out: &Output) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn eval_reproduces_linear_functions() {
    let out = linkop(&["eval", "--c", "0", "--n", "5", "--rho", "2", "--k", "0", "--f", "e1", "--grid", "0:2:0.5"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["x", "value"]);
    assert_eq!(rows.len(), 5);
    for r in rows {
        assert!((r[1] - r[0]).abs() < 1e-8, "{r:?}");
    }
}

#[test]
fn eval_constant_image() {
    let out = linkop(&["eval", "--c", "1", "--n", "5", "--rho", "2", "--k", "2", "--f", "e0", "--grid", "0:1:0.25"]);
    assert!(out.status.success());
    let (_, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 5);
    for r in rows {
        assert!((r[1] - 4.0 / 3.0).abs() < 1e-8, "{r:?}");
    }
}

#[test]
fn parameter_errors_exit_2_and_name_the_constraint() {
    let out = linkop(&["eval", "--c", "0", "--n", "8", "--rho", "2", "--k", "5", "--oracle", "--f", "e1", "--grid", "0:1:0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k <= 4"));

    let out = linkop(&["eval", "--c", "0", "--n", "3", "--rho", "2", "--k", "3", "--f", "e1", "--grid", "0:1:0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("requires n - k >= 1"));

    let out = linkop(&["kernel", "--c", "0", "--n", "3", "--rho", "2.5", "--j", "1", "--grid", "0:1:0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("natural number"));

    let out = linkop(&["eval", "--c", "0", "--n", "3", "--rho", "2", "--f", "e1", "--grid", "1:0:0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("a < b"));
}

#[test]
fn kernel_at_rho_one_is_shifted_basis() {
    let out = linkop(&["kernel", "--c", "1", "--n", "5", "--rho", "1", "--k", "1", "--j", "2", "--grid", "0:2:0.1"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["t", "K_scaled", "N_spline"]);
    let shifted = ShapeParams::new(1.0, 6.0).unwrap();
    for r in rows {
        assert!((r[1] - basis_p(&shifted, 2, r[0])).abs() < 1e-15, "{r:?}");
    }
}

#[test]
fn kernel_spline_column_vanishes_off_support() {
    let out = linkop(&["kernel", "--c", "1", "--n", "5", "--rho", "3", "--k", "2", "--j", "1", "--grid", "1:2:0.05"]);
    assert!(out.status.success());
    let (_, rows) = csv_rows(&out);
    assert!(rows.iter().all(|r| r[2] == 0.0));
}

#[test]
fn bspline_hat() {
    let out = linkop(&["bspline", "--n", "4", "--k", "2", "--j", "0", "--grid", "0:0.5:0.125"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["t", "N"]);
    let n: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let expect = [0.0, 0.5, 1.0, 0.5, 0.0];
    for (a, b) in n.iter().zip(expect) {
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn sweep_figure_one() {
    let out = linkop(&["sweep", "--c", "1", "--n", "5", "--k", "1", "--j", "1", "--rho", "10,30,150", "--grid", "0:1:0.002"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["rho", "sup_dist", "l1_dist"]);
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), [10.0, 30.0, 150.0]);
    assert!(rows.windows(2).all(|w| w[1][2] < w[0][2]));

    let json = linkop(&["sweep", "--c", "1", "--n", "5", "--k", "1", "--j", "1", "--rho", "10,30,150", "--grid", "0:1:0.002", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 3);
    for (obj, row) in arr.iter().zip(&rows) {
        assert_eq!(obj["rho"].as_f64().unwrap(), row[0]);
        assert_eq!(obj["l1_dist"].as_f64().unwrap(), row[2]);
    }

    let single = linkop(&["sweep", "--c", "1", "--n", "5", "--j", "1", "--rho", "7"]);
    assert_eq!(csv_rows(&single).1.len(), 1);

    let bad = linkop(&["sweep", "--c", "1", "--n", "5", "--j", "1", "--rho", "30,10"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_suite_filter_and_exit_codes() {
    let out = linkop(&["verify", "--suite", "lemma", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("check_name,"));
    assert!(lines.all(|l| l.starts_with("lemma_omega,")));

    let out = linkop(&["verify", "--suite", "lemma", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));

    let out = linkop(&["verify", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn file_output_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [
        &["eval", "--c", "1", "--n", "5", "--rho", "3", "--k", "1", "--f", "bounded_smooth", "--grid", "0:2:0.25"],
        &["kernel", "--c", "0", "--n", "5", "--rho", "4", "--k", "2", "--j", "1", "--grid", "0:1:0.05"],
        &["bspline", "--n", "5", "--k", "3", "--j", "1", "--grid", "0:1:0.05", "--format", "json"],
        &["sweep", "--c", "1", "--n", "5", "--j", "1", "--rho", "2,4"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let stdout = linkop(args);
        assert!(stdout.status.success());
        let path = dir.path().join(format!("out{i}"));
        let mut with_file = args.to_vec();
        with_file.extend(["--out", path.to_str().unwrap()]);
        let file = linkop(&with_file);
        assert!(file.status.success());
        assert!(file.stdout.is_empty());
        assert_eq!(fs::read(&path).unwrap(), stdout.stdout, "{args:?}");
    }
}

#[test]
fn config_file_with_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("params.cfg");
    fs::write(&path, "# shared parameters\nc = 0\nn = 5\nrho = 2\nk = 0\nf = e1\ngrid = 0:1:0.5\nj = 3\n").unwrap();
    let cfg = path.to_str().unwrap();
    let out = linkop(&["eval", "--config", cfg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 3);
    let out = linkop(&["eval", "--config", cfg, "--f", "e0"]);
    let (_, rows) = csv_rows(&out);
    assert!(rows.iter().all(|r| (r[1] - 1.0).abs() < 1e-8));
    let out = linkop(&["--config", cfg, "bspline", "--k", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
