//! Black-box tests of the `qdm` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn qdm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdm"))
        .args(args)
        .output()
        .expect("qdm runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn payload(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn ok(args: &[&str]) -> Value {
    let out = qdm(args);
    assert_eq!(
        code(&out),
        0,
        "{args:?} failed: {}{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    payload(&out)
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

/// Entry (re, im) of a matrix payload {"dim", "entries"}.
fn entry(m: &Value, i: usize, j: usize) -> (f64, f64) {
    let e = &m["entries"][i][j];
    (e[0].as_f64().unwrap(), e[1].as_f64().unwrap())
}

fn dim(m: &Value) -> usize {
    m["dim"].as_u64().unwrap() as usize
}

/// Runs `qdm check --matrix` on a matrix payload.
fn check_matrix(dir: &Path, m: &Value) -> Value {
    let p = write(dir, "m.json", &m.to_string());
    ok(&["check", "--matrix", p.to_str().unwrap()])
}

#[test]
fn check_zero_vector_is_physical() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "v.json", "[0,0,0,0,0,0,0,0]");
    let v = ok(&["check", "--n", "3", "--vec", p.to_str().unwrap()]);
    assert_eq!(v["physical"], true);
    let a: Vec<f64> = serde_json::from_value(v["coeffs"].clone()).unwrap();
    let expected = [1.0, 1.0, 1.0 / 3.0, 1.0 / 27.0];
    for (x, y) in a.iter().zip(expected) {
        assert!((x - y).abs() < 1e-12);
    }
    assert!((v["min_eig"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn check_accepts_full_bloch_object() {
    let dir = TempDir::new().unwrap();
    let p = write(
        dir.path(),
        "v.json",
        r#"{"n":2,"basis":"ggm","components":[0.0,0.0,1.0]}"#,
    );
    let v = ok(&["check", "--vec", p.to_str().unwrap()]);
    assert_eq!(v["physical"], true);
}

#[test]
fn check_nonphysical_is_exit_zero() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "v.json", "[0,0,3]");
    let v = ok(&["check", "--vec", p.to_str().unwrap()]);
    assert_eq!(v["physical"], false);
    assert!(v["min_eig"].as_f64().unwrap() < 0.0);
}

#[test]
fn check_werner_half_matches_polynomials() {
    let dir = TempDir::new().unwrap();
    let w = ok(&["family", "werner", "--x", "0.5"]);
    let v = check_matrix(dir.path(), &w["matrix"]);
    assert_eq!(v["physical"], true);
    let x: f64 = 0.5;
    let expected = [
        1.0,
        1.0,
        3.0 / 8.0 * (1.0 - x * x),
        1.0 / 16.0 * (1.0 - 3.0 * x * x + 2.0 * x * x * x),
        1.0 / 256.0 * (1.0 + 3.0 * x) * (1.0 - x).powi(3),
    ];
    let a: Vec<f64> = serde_json::from_value(v["coeffs"].clone()).unwrap();
    assert_eq!(a.len(), 5);
    for (got, want) in a.iter().zip(expected) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
}

#[test]
fn ragged_matrix_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let p = write(
        dir.path(),
        "m.json",
        r#"{"dim":2,"entries":[[[1,0],[0,0]],[[0,0]]]}"#,
    );
    let out = qdm(&["check", "--matrix", p.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn unparseable_json_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "m.json", "{not json");
    assert_eq!(code(&qdm(&["check", "--matrix", p.to_str().unwrap()])), 2);
    let p = write(dir.path(), "v.json", "[1,2,3,4,5]");
    assert_eq!(code(&qdm(&["check", "--vec", p.to_str().unwrap()])), 2);
}

#[test]
fn missing_file_is_usage_error() {
    assert_eq!(code(&qdm(&["check", "--matrix", "/nonexistent/m.json"])), 2);
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(code(&qdm(&["nonsense"])), 2);
    assert_eq!(code(&qdm(&["check"])), 2);
    assert_eq!(code(&qdm(&["check", "--vec", "a", "--matrix", "b"])), 2);
    assert_eq!(code(&qdm(&["family", "werner"])), 2);
    assert_eq!(
        code(&qdm(&["family", "bell-diag", "--weights", "0.5,0.5"])),
        2
    );
    assert_eq!(code(&qdm(&["simulate", "--omega0", "cos"])), 2);
    assert_eq!(code(&qdm(&["sample", "--composite", "2"])), 2);
}

#[test]
fn werner_half_is_entangled() {
    let v = ok(&["family", "werner", "--x", "0.5", "--ppt"]);
    assert_eq!(v["separable"], false);
    assert_eq!(v["verdict"], "entangled");
    let v = ok(&["family", "werner", "--x", "0.2", "--ppt"]);
    assert_eq!(v["separable"], true);
}

#[test]
fn werner_out_of_range_is_domain_error() {
    for x in ["1.5", "-0.5"] {
        let out = qdm(&["family", "werner", "--x", x]);
        assert_eq!(code(&out), 1);
        assert_eq!(payload(&out)["error"], "OutOfRange");
    }
}

#[test]
fn other_family_range_errors() {
    let cases: [&[&str]; 4] = [
        &["family", "werner-pt", "--p", "2"],
        &["family", "two-param", "--p", "-1", "--alpha", "0.3"],
        &["family", "bell-diag", "--weights", "0.5,0.6,0,0"],
        &[
            "family",
            "five-param",
            "--weights",
            "1,0,0,0",
            "--alpha",
            "2",
            "--beta",
            "0",
        ],
    ];
    for args in cases {
        let out = qdm(args);
        assert_eq!(code(&out), 1, "{args:?}");
        assert!(payload(&out)["error"].is_string());
    }
}

#[test]
fn projector_alpha_zero_is_11() {
    let v = ok(&["family", "projector", "--alpha", "0"]);
    let m = &v["matrix"];
    assert_eq!(dim(m), 4);
    for i in 0..4 {
        for j in 0..4 {
            let want = if i == 3 && j == 3 { 1.0 } else { 0.0 };
            let (re, im) = entry(m, i, j);
            assert!((re - want).abs() < 1e-15 && im.abs() < 1e-15);
        }
    }
}

#[test]
fn two_param_verdict_matches_threshold() {
    let alpha = "0.3926990817";
    let threshold = 1.0 / (1.0 + 2f64.sqrt());
    for p in [0.2, 0.4, threshold - 1e-6, threshold + 1e-6, 0.9] {
        let ps = p.to_string();
        let v = ok(&["family", "two-param", "--p", &ps, "--alpha", alpha, "--ppt"]);
        assert_eq!(v["separable"], p <= threshold, "p = {p}");
    }
}

#[test]
fn family_matrices_pass_check() {
    let dir = TempDir::new().unwrap();
    let cases: [&[&str]; 7] = [
        &["family", "werner", "--x", "-0.3333333333333333"],
        &["family", "werner", "--x", "1"],
        &["family", "werner-pt", "--p", "0.4"],
        &["family", "projector", "--alpha", "0.7"],
        &["family", "two-param", "--p", "0.6", "--alpha", "0.2"],
        &[
            "family",
            "five-param",
            "--weights",
            "0.1,0.2,0.3,0.4",
            "--alpha",
            "0.3",
            "--beta",
            "1.1",
        ],
        &[
            "family",
            "bell-diag",
            "--weights",
            "0.25,0.25,0.25,0.25",
            "--ppt",
        ],
    ];
    for args in cases {
        let v = ok(args);
        assert_eq!(
            check_matrix(dir.path(), &v["matrix"])["physical"],
            true,
            "{args:?}"
        );
    }
}

#[test]
fn sample_is_deterministic_and_physical() {
    let dir = TempDir::new().unwrap();
    let args = ["sample", "--n", "4", "--seed", "7", "--count", "10"];
    let a = qdm(&args);
    let b = qdm(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = payload(&a);
    let states = v["states"].as_array().unwrap();
    assert_eq!(states.len(), 10);
    for s in states {
        assert_eq!(dim(&s["matrix"]), 4);
        assert_eq!(check_matrix(dir.path(), &s["matrix"])["physical"], true);
    }
    let c = qdm(&["sample", "--n", "4", "--seed", "8", "--count", "10"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn sample_count_zero_is_empty() {
    let v = ok(&["sample", "--n", "3", "--count", "0"]);
    assert_eq!(v["states"].as_array().unwrap().len(), 0);
}

#[test]
fn sample_composite_records_dims() {
    let dir = TempDir::new().unwrap();
    let v = ok(&[
        "sample",
        "--composite",
        "2,2",
        "--count",
        "3",
        "--seed",
        "1",
    ]);
    assert_eq!(v["kind"], "composite");
    for s in v["states"].as_array().unwrap() {
        assert_eq!(s["n"], 2);
        assert_eq!(s["m"], 2);
        assert_eq!(dim(&s["matrix"]), 4);
        assert_eq!(check_matrix(dir.path(), &s["matrix"])["physical"], true);
    }
}

#[test]
fn sample_params_round_trip_through_jarlskog_build() {
    let dir = TempDir::new().unwrap();
    let v = ok(&["sample", "--n", "3", "--count", "1", "--seed", "3"]);
    let state = &v["states"][0];
    let p = write(dir.path(), "p.json", &state["params"].to_string());
    let built = ok(&["jarlskog", "build", "--params", p.to_str().unwrap()]);
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = entry(&built["density"], i, j);
            let (c, d) = entry(&state["matrix"], i, j);
            assert!((a - c).abs() < 1e-14 && (b - d).abs() < 1e-14);
        }
    }
}

#[test]
fn jarlskog_build_errors() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "p.json", "{");
    assert_eq!(
        code(&qdm(&[
            "jarlskog",
            "build",
            "--params",
            p.to_str().unwrap()
        ])),
        2
    );
    let bad =
        r#"{"n":2,"eigenvalues":[0.7,0.7],"levels":[{"theta":0.0,"z":[[1.0,0.0]]}],"phases":null}"#;
    let p = write(dir.path(), "p.json", bad);
    let out = qdm(&["jarlskog", "build", "--params", p.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(payload(&out)["error"].is_string());
}

#[test]
fn simulate_conserves_block_lengths() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("t.csv");
    for omega in ["1", "sin"] {
        let v = ok(&[
            "simulate",
            "--model",
            "three-level",
            "--a",
            "1",
            "--b",
            "1",
            "--delta",
            "0",
            "--omega0",
            omega,
            "--t",
            "10",
            "--dt",
            "0.001",
            "--out",
            csv.to_str().unwrap(),
        ]);
        for key in ["Lambda3", "Lambda4", "Lambda1"] {
            let d = v["max_length_drift"][key].as_f64().unwrap();
            assert!(d < 1e-6, "{omega}: {key} drift {d}");
        }
        let text = std::fs::read_to_string(&csv).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("t,l1,"));
        assert!(header.ends_with("Lambda3,Lambda4,Lambda1"));
        assert_eq!(lines.count(), 10001);
    }
}

#[test]
fn simulate_zero_duration_single_row() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("t.csv");
    let v = ok(&["simulate", "--t", "0", "--out", csv.to_str().unwrap()]);
    assert_eq!(v["samples"], 1);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 2);
}

#[test]
fn simulate_nonphysical_init_is_domain_error() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "v.json", "[0,0,3,0,0,0,0,0]");
    let out = qdm(&["simulate", "--init", p.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(payload(&out)["error"], "NonPhysicalInitialState");
}

#[test]
fn invariants_of_maximally_mixed_qutrit() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "v.json", "[0,0,0,0,0,0,0,0]");
    let v = ok(&["invariants", "--vec", p.to_str().unwrap()]);
    let tr: Vec<f64> = serde_json::from_value(v["trace_invariants"].clone()).unwrap();
    for (k, t) in tr.iter().enumerate() {
        assert!((t - 3f64.powi(-(k as i32))).abs() < 1e-12);
    }
}

#[test]
fn basis_payload() {
    let v = ok(&["basis", "--n", "3", "--ordering", "paper-gellmann3"]);
    assert!(v.is_object());
    let out = qdm(&["basis", "--n", "1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn out_flag_writes_payload() {
    let dir = TempDir::new().unwrap();
    let dest = dir.path().join("w.json");
    let out = qdm(&[
        "family",
        "werner",
        "--x",
        "0.1",
        "--out",
        dest.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert_eq!(written, payload(&out));
}
