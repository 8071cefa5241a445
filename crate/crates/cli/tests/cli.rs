use std::path::{Path, PathBuf};
use std::process::Command;

use matlog::format::{parse_matrix, ParsedMatrix};
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    report: Option<Value>,
    stderr: String,
}

fn matlog(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_matlog")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        report: serde_json::from_slice(&out.stdout).ok(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn residual(r: &Run) -> f64 {
    r.report.as_ref().unwrap()["residual"].as_f64().unwrap()
}

fn error_code(r: &Run) -> String {
    r.report.as_ref().unwrap()["status"]["error"]["code"].as_str().unwrap().to_string()
}

const ID2: &str = r#"{"n":2,"field":"real","data":[[1,0],[0,1]]}"#;
const NEGDIAG: &str = r#"{"n":2,"field":"real","data":[[-1,0],[0,1]]}"#;
const COUNTER: &str = r#"{"n":3,"field":"real","data":[[-1,0,0],[0,-2,0],[0,0,1]]}"#;
const GENERAL: &str = r#"{"n":3,"field":"real","data":[[0.5,-1.2,0.3],[0.9,0.1,-0.4],[0.2,0.7,1.3]]}"#;

#[test]
fn logm_identity() {
    let dir = TempDir::new().unwrap();
    let r = matlog(&["logm", s(&write(&dir, "id2.json", ID2))]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(residual(&r) <= 1e-10);
    let rep = r.report.unwrap();
    assert_eq!(rep["status"], "ok");
    assert_eq!(rep["operation"], "logm");
    assert_eq!(rep["input_digest"].as_str().unwrap().len(), 64);
    assert!(rep["trace_summary"]["steps"].as_u64().unwrap() >= 1);
}

#[test]
fn expm_of_half_turn_generator() {
    let dir = TempDir::new().unwrap();
    let pi = std::f64::consts::PI;
    let body = format!(r#"{{"n":3,"field":"real","data":[[0,{},0],[{},0,0],[0,0,0]]}}"#, -pi, pi);
    let r = matlog(&["expm", s(&write(&dir, "ltilde.json", &body))]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let out = r.report.unwrap()["output"].to_string();
    let m = parse_matrix(out.as_bytes()).unwrap().into_real().unwrap();
    let expected = [-1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0];
    for (a, b) in m.as_slice().iter().zip(expected) {
        assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn logm_real_rejects_negative_axis() {
    let dir = TempDir::new().unwrap();
    let r = matlog(&["logm-real", s(&write(&dir, "negdiag.json", NEGDIAG))]);
    assert_eq!(r.code, 2);
    assert_eq!(error_code(&r), "SpectrumOnRay");
    assert!(r.stderr.contains("SpectrumOnRay"));
}

#[test]
fn counterexample_factor_but_no_real_log() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "m.json", COUNTER);
    assert_eq!(matlog(&["logm-real", s(&file)]).code, 2);
    let r = matlog(&["factor", "--tol", "1e-8", s(&file)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(residual(&r) <= 1e-8);
    let rep = r.report.unwrap();
    assert_eq!(rep["output"]["prefix"], "identity");
    assert_eq!(rep["output"]["k_negative"].as_u64().unwrap() % 2, 0);
}

#[test]
fn factor_negative_determinant_uses_reflection() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "m.json", r#"{"n":2,"field":"real","data":[[0,1],[1,0]]}"#);
    let r = matlog(&["factor", "--tol", "1e-8", s(&file)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report.unwrap()["output"]["prefix"], "i_tilde");
}

#[test]
fn verify_reproduces_reported_residuals() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "a.json", GENERAL);
    for op in ["logm", "logm-real", "sqlog", "double-log", "factor", "schur", "eig", "expm"] {
        let r = matlog(&[op, "--tol", "1e-8", s(&file)]);
        assert_eq!(r.code, 0, "{op}: {}", r.stderr);
        let reported = residual(&r);
        let log = write(&dir, &format!("{op}.report.json"), &r.report.unwrap().to_string());
        let v = matlog(&["verify", "--tol", "1e-8", s(&file), s(&log)]);
        assert_eq!(v.code, 0, "{op}: {}", v.stderr);
        let rep = v.report.as_ref().unwrap();
        assert_eq!(rep["output"]["verified_operation"], op);
        assert_eq!(rep["output"]["digest_match"], true);
        let recomputed = residual(&v);
        assert!(
            recomputed <= 2.0 * reported.max(f64::EPSILON) && reported <= 2.0 * recomputed.max(f64::EPSILON),
            "{op}: reported {reported:e}, recomputed {recomputed:e}"
        );
    }
}

#[test]
fn out_file_is_a_matrix_file_verify_accepts() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "a.json", GENERAL);
    let out = dir.path().join("log.json");
    let r = matlog(&["logm", "--out", s(&out), s(&file)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let parsed = parse_matrix(&std::fs::read(&out).unwrap()).unwrap();
    assert!(matches!(parsed, ParsedMatrix::Complex(_)));
    let v = matlog(&["verify", s(&file), s(&out)]);
    assert_eq!(v.code, 0, "{}", v.stderr);
    assert!(residual(&v) <= 1e-10);
}

#[test]
fn verify_flags_a_wrong_logarithm() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "a.json", r#"{"n":1,"field":"real","data":[[2]]}"#);
    let log = write(&dir, "b.json", r#"{"n":1,"field":"real","data":[[0.5]]}"#);
    let v = matlog(&["verify", s(&file), s(&log)]);
    assert_eq!(v.code, 4);
    assert_eq!(error_code(&v), "VerificationFailed");
}

#[test]
fn trace_flag_emits_steps() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "a.json", GENERAL);
    let r = matlog(&["logm-real", "--trace", "--eta", "0.25", s(&file)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rep = r.report.unwrap();
    let steps = rep["trace"]["steps"].as_array().unwrap();
    assert_eq!(steps.len() as u64, rep["trace_summary"]["steps"].as_u64().unwrap());
    assert!(steps.iter().all(|s| s["contraction"].as_f64().unwrap() <= 0.25));
    assert_eq!(steps.last().unwrap()["t"], 0.0);
    assert_eq!(rep["tolerance"]["contraction_target"], 0.25);
}

#[test]
fn input_errors_exit_3() {
    let dir = TempDir::new().unwrap();
    let shape = write(&dir, "shape.json", r#"{"n":2,"field":"real","data":[[1]]}"#);
    let syntax = write(&dir, "syntax.json", "{\"n\": 1,\n \"data\": [[1,]]}");
    let complex = write(&dir, "c.json", r#"{"n":1,"field":"complex","data":[[[0,1]]]}"#);
    let id = write(&dir, "id.json", ID2);
    for args in [
        vec!["logm", s(&shape)],
        vec!["logm", s(&syntax)],
        vec!["logm", "/nonexistent/matrix.json"],
        vec!["logm-real", s(&complex)],
        vec!["logm", "--eta", "1.5", s(&id)],
        vec!["logm", "--tol", "-1", s(&id)],
    ] {
        let r = matlog(&args);
        assert_eq!(r.code, 3, "{args:?}: {}", r.stderr);
        assert!(r.report.is_some());
    }
    assert_eq!(matlog(&["frobnicate"]).code, 3);
    assert_eq!(matlog(&["logm"]).code, 3);
    assert_eq!(matlog(&["logm", "--eta", "abc", s(&id)]).code, 3);
    let syntax_err = matlog(&["logm", s(&syntax)]);
    assert!(syntax_err.stderr.contains("line 2"), "{}", syntax_err.stderr);
}

#[test]
fn domain_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let singular = write(&dir, "s.json", r#"{"n":2,"field":"real","data":[[1,2],[2,4]]}"#);
    for op in ["logm", "logm-real", "sqlog", "factor", "double-log"] {
        let r = matlog(&[op, s(&singular)]);
        assert_eq!(r.code, 2, "{op}: {}", r.stderr);
    }
}

#[test]
fn complex_input_to_logm() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "c.json", r#"{"n":1,"field":"complex","data":[[[0,1]]]}"#);
    let r = matlog(&["logm", s(&file)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(residual(&r) <= 1e-10);
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(matlog(&["--help"]).code, 0);
    assert_eq!(matlog(&["--version"]).code, 0);
}

#[test]
fn selftest_passes() {
    let r = matlog(&["selftest", "--seed", "7"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rep = r.report.unwrap();
    let criteria = rep["output"]["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 10);
    assert!(criteria.iter().all(|c| c["passed"] == true));
    assert!(rep["residual"].is_number());
    assert_eq!(r.stderr.lines().filter(|l| l.starts_with("[PASS]")).count(), 10);
}
