use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gabp_core::cdma::{CorrelationFixture, FixtureName};
use gabp_core::dense::direct_solve;
use gabp_core::io::{write_matrix_market, write_vector};
use gabp_core::SymmetricSparseMatrix;

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("gabp-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let path = self.0.join(name);
        std::fs::write(&path, text).unwrap();
        path
    }

    fn system(&self, a: &SymmetricSparseMatrix, b: &[f64]) -> (PathBuf, PathBuf) {
        let (mtx, rhs) = (self.0.join("a.mtx"), self.0.join("b.txt"));
        write_matrix_market(&mtx, a).unwrap();
        write_vector(&rhs, b).unwrap();
        (mtx, rhs)
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn gabp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gabp")).args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn parse_x(text: &str) -> Vec<f64> {
    text.lines().filter_map(|l| l.trim().strip_prefix("x_")).map(|l| l.split('=').nth(1).unwrap().trim().parse().unwrap()).collect()
}

#[test]
fn serial_gabp_on_fixture_files_matches_oracle() {
    let s = Scratch::new("r3");
    let r3 = CorrelationFixture::load(FixtureName::R3).matrix;
    let (mtx, rhs) = s.system(&r3, &[1.0; 3]);
    let out = gabp(&["solve", "--method", "gabp-serial", "--matrix", p(&mtx), "--rhs", p(&rhs)]);
    assert_eq!(out.status.code(), Some(0));
    let x = parse_x(&stdout(&out));
    let exact = direct_solve(&r3, &[1.0; 3]).unwrap();
    assert!(x.iter().zip(&exact).all(|(u, v)| (u - v).abs() < 1e-5), "{x:?}");
    assert!(stdout(&out).contains("iterations: 16"));
}

#[test]
fn identity_solves_in_one_iteration() {
    let s = Scratch::new("id");
    let (mtx, rhs) = s.system(&SymmetricSparseMatrix::identity(3).unwrap(), &[1.5, -2.0, 0.25]);
    for method in ["jacobi", "gs", "sor", "gabp-parallel", "gabp-serial"] {
        let out = gabp(&["solve", "--method", method, "--matrix", p(&mtx), "--rhs", p(&rhs)]);
        assert_eq!(out.status.code(), Some(0), "{method}");
        assert!(stdout(&out).contains("iterations: 1\n"), "{method}");
        assert_eq!(parse_x(&stdout(&out)), vec![1.5, -2.0, 0.25]);
    }
}

#[test]
fn divergent_jacobi_exits_two_with_best_effort() {
    let s = Scratch::new("div");
    let a = SymmetricSparseMatrix::from_dense(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
    let (mtx, rhs) = s.system(&a, &[1.0, 1.0]);
    let out = gabp(&["solve", "--method", "jacobi", "--matrix", p(&mtx), "--rhs", p(&rhs), "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["converged"], false);
    assert_eq!(v["x"].as_array().unwrap().len(), 2);
}

#[test]
fn parse_errors_name_file_and_line() {
    let s = Scratch::new("parse");
    let bad = s.write("bad.mtx", "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n2 1 oops\n");
    let rhs = s.write("b.txt", "1\n1\n");
    let out = gabp(&["solve", "--matrix", p(&bad), "--rhs", p(&rhs)]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.mtx:4:"), "{err}");

    let short = s.write("short.txt", "1\n");
    let good = s.write("good.mtx", "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n2 2 1\n");
    let out = gabp(&["solve", "--matrix", p(&good), "--rhs", p(&short)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("short.txt"));
}

#[test]
fn unknown_method_is_rejected_before_reading_files() {
    let out = gabp(&["solve", "--method", "newton", "--matrix", "/nonexistent/a.mtx", "--rhs", "/nonexistent/b"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown method") && !err.contains("nonexistent"), "{err}");
}

#[test]
fn diagnose_reports_conditions_and_verdict() {
    let out = gabp(&["diagnose", "--fixture", "R3"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0));
    assert!(text.contains("strictly diagonally dominant: false"));
    assert!(text.contains("rho(|I-A|): 0.900769"));
    assert!(text.contains("verdict: GaBP convergence guaranteed"));

    let s = Scratch::new("diag");
    let chain = SymmetricSparseMatrix::from_dense(&[vec![3.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 3.0]]).unwrap();
    let (mtx, _) = s.system(&chain, &[1.0; 3]);
    let text = stdout(&gabp(&["diagnose", "--matrix", p(&mtx)]));
    assert!(text.contains("dominant: true") && text.contains("tree: true"), "{text}");

    let a = SymmetricSparseMatrix::from_dense(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
    let (mtx, _) = s.system(&a, &[1.0; 2]);
    let out = gabp(&["diagnose", "--matrix", p(&mtx), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["spectral_radius_estimate"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert_eq!(v["verdict"], "no guarantee (may still converge)");
}

#[test]
fn bench_outputs_are_complete_and_deterministic() {
    let text = stdout(&gabp(&["bench"]));
    let rows = text.lines().skip(1).take_while(|l| !l.trim().is_empty()).count();
    assert_eq!(rows, 8);
    assert_eq!(text, stdout(&gabp(&["bench"])));
    let v: serde_json::Value = serde_json::from_str(&stdout(&gabp(&["bench", "--format", "json"]))).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 16);
    assert_eq!(stdout(&gabp(&["bench", "--format", "csv"])).lines().count(), 17);
}

#[test]
fn traces_start_at_the_initial_iterate() {
    let jacobi = stdout(&gabp(&["trace", "--method", "jacobi", "--fixture", "R3"]));
    let lines: Vec<&str> = jacobi.lines().collect();
    assert_eq!(lines[0], "iter,x_1,x_2,x_3");
    assert!((lines.len() - 1).abs_diff(111) <= 2, "{} rows", lines.len() - 1);
    let first: Vec<f64> = lines[1].split(',').skip(1).map(|v| v.parse().unwrap()).collect();
    assert_eq!(first, vec![1.0, 1.0, 1.0]);
    assert!(lines[1].starts_with("0,"));

    let parallel = stdout(&gabp(&["trace", "--method", "gabp-parallel", "--fixture", "R3"]));
    assert!((parallel.lines().count() - 1).abs_diff(23) <= 2);
}

#[test]
fn out_flag_writes_file() {
    let s = Scratch::new("out");
    let path = s.0.join("bench.txt");
    let out = gabp(&["bench", "--out", p(&path)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("Method"));
}

#[test]
fn schedule_and_omega_flags_take_effect() {
    let serial = stdout(&gabp(&["solve", "--fixture", "R3", "--method", "gabp-parallel", "--schedule", "serial"]));
    assert!(serial.contains("method: gabp-serial") && serial.contains("iterations: 16"));
    let sor = gabp(&["solve", "--fixture", "R3", "--method", "sor", "--omega", "1.0"]);
    let gs = gabp(&["solve", "--fixture", "R3", "--method", "gs"]);
    assert_eq!(parse_x(&stdout(&sor)), parse_x(&stdout(&gs)));
    assert_eq!(gabp(&["solve", "--fixture", "R3", "--omega", "fast"]).status.code(), Some(1));
    assert_eq!(gabp(&["solve", "--fixture", "R3", "--method", "sor", "--omega", "2.5"]).status.code(), Some(1));
}
