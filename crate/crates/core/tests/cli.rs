use std::path::{Path, PathBuf};

use serde_json::Value;
use symqudit::cli::run;
use symqudit::io::{matrix_to_json, read_state, State};
use symqudit::linalg::CMatrix;
use tempfile::TempDir;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("symqudit").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

fn write_matrix(dir: &Path, name: &str, m: &CMatrix) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, matrix_to_json(m)).unwrap();
    p
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let p = dir.join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", p.to_str().unwrap()]);
    let (code, _, err) = invoke(&full);
    assert_eq!(code, 0, "{err}");
    p
}

#[test]
fn classify_representatives() {
    let dir = TempDir::new().unwrap();
    let w = generate(dir.path(), "w.json", &["excitation", "--n", "3", "--d", "2", "--j", "1"]);
    let (code, out, _) = invoke(&["classify", w.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["generic_signature"], "{ { 2 } }");
    assert_eq!(v["stabilizer_dimension"], 2);
    assert_eq!(v["verdict"]["kind"], "verified");

    let g = generate(dir.path(), "g.json", &["ghz", "--n", "3", "--d", "3"]);
    let v = json(&invoke(&["classify", g.to_str().unwrap()]).1);
    assert_eq!(v["generic_signature"], "{ { 1 }, { 1 }, { 1 } }");
    let lu: Vec<f64> = serde_json::from_value(v["lu_invariant"].clone()).unwrap();
    assert!(lu.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-9));

    let u = generate(dir.path(), "u.json", &["unique", "--n", "3", "--blocks", "2,1"]);
    let v = json(&invoke(&["classify", u.to_str().unwrap()]).1);
    assert_eq!(v["generic_signature"], "{ { 2 }, { 1 } }");
}

#[test]
fn truncated_ghz_is_refuted() {
    let dir = TempDir::new().unwrap();
    let g = generate(dir.path(), "g.json", &["ghz", "--n", "3", "--d", "3", "--alpha", "1,1,0"]);
    let v = json(&invoke(&["classify", g.to_str().unwrap()]).1);
    assert_eq!(v["verdict"]["kind"], "refuted");
    assert_eq!(v["verdict"]["witness_signature"], "{ { 2 }, { 1 } }");
}

#[test]
fn output_is_deterministic_for_a_seed() {
    let dir = TempDir::new().unwrap();
    let s = generate(dir.path(), "s.json", &["multiblock", "--n", "3", "--blocks", "2,2", "--j", "1", "--weights", "2,1"]);
    let a = invoke(&["classify", s.to_str().unwrap(), "--seed", "7"]);
    let b = invoke(&["classify", s.to_str().unwrap(), "--seed", "7"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn symmetrize_diagonal_bell() {
    let dir = TempDir::new().unwrap();
    let bell = generate(dir.path(), "b.json", &["ghz", "--n", "2", "--d", "2", "--normalize"]);
    let a1 = write_matrix(dir.path(), "a1.json", &CMatrix::from_real(&[&[2.0, 0.0], &[0.0, 1.0]]));
    let a2 = write_matrix(dir.path(), "a2.json", &CMatrix::from_real(&[&[0.5, 0.0], &[0.0, 1.0]]));
    let (code, out, err) = invoke(&["symmetrize", bell.to_str().unwrap(), a1.to_str().unwrap(), a2.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let v = json(&out);
    let a: CMatrix = serde_json::from_value(v["a"].clone()).unwrap();
    assert!((&a - &CMatrix::identity(2)).norm_fro() < 1e-12);
    assert!(v["residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn matrix_commands() {
    let dir = TempDir::new().unwrap();
    let j = write_matrix(dir.path(), "j.json", &CMatrix::from_real(&[&[4.0, 1.0], &[0.0, 4.0]]));
    let v = json(&invoke(&["jordan", j.to_str().unwrap()]).1);
    assert_eq!(v["signature"], "{ { 2 } }");
    let (code, out, _) = invoke(&["root", j.to_str().unwrap(), "--order", "2"]);
    assert_eq!(code, 0);
    let s: CMatrix = serde_json::from_str(out.trim()).unwrap();
    let expected = CMatrix::from_real(&[&[2.0, 0.25], &[0.0, 2.0]]);
    assert!((&s - &expected).norm_fro() < 1e-13);

    let v = json(&invoke(&["count", "--d", "4"]).1);
    assert_eq!(v["signatures"], 14);
    assert_eq!(v["unique_classes"], 5);
}

#[test]
fn apply_and_check_symmetry() {
    let dir = TempDir::new().unwrap();
    let g = generate(dir.path(), "g.json", &["ghz", "--n", "3", "--d", "2"]);
    let x = write_matrix(dir.path(), "x.json", &CMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]));
    let site = dir.path().join("site.json");
    let (code, _, _) = invoke(&["apply", g.to_str().unwrap(), x.to_str().unwrap(), "--site", "2", "--out", site.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(matches!(read_state(&site).unwrap(), State::Full(_)));
    let v = json(&invoke(&["check-sym", site.to_str().unwrap()]).1);
    assert_eq!(v["symmetric"], false);

    let all = dir.path().join("all.json");
    let (code, _, _) = invoke(&["apply", g.to_str().unwrap(), x.to_str().unwrap(), "--out", all.to_str().unwrap()]);
    assert_eq!(code, 0);
    // X on every site only swaps the two GHZ branches.
    assert_eq!(read_state(&all).unwrap(), read_state(&g).unwrap());

    let v = json(&invoke(&["stab", g.to_str().unwrap()]).1);
    assert_eq!(v["dimension"], 2);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(invoke(&["--help"]).0, 0);
    assert_eq!(invoke(&["--version"]).0, 0);
    assert_eq!(invoke(&["frobnicate"]).0, 1);
    assert_eq!(invoke(&["count"]).0, 1);
    assert_eq!(invoke(&["count", "--d", "3", "--tol", "-1"]).0, 1);
    assert_eq!(invoke(&["count", "--d", "3", "--samples", "0"]).0, 1);

    let missing = dir.path().join("missing.json");
    let (code, _, err) = invoke(&["classify", missing.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"rows\": 2}").unwrap();
    assert_eq!(invoke(&["jordan", bad.to_str().unwrap()]).0, 2);

    assert_eq!(invoke(&["gen", "excitation", "--n", "2", "--d", "2", "--j", "5"]).0, 2);
    let g = generate(dir.path(), "g.json", &["ghz", "--n", "3", "--d", "2"]);
    let single = write_matrix(dir.path(), "i.json", &CMatrix::identity(2));
    let s = single.to_str().unwrap();
    assert_eq!(invoke(&["symmetrize", g.to_str().unwrap(), s, s]).0, 2);
}

#[test]
fn binary_runs() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_symqudit"))
        .args(["count", "--d", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), r#"{"signatures":6,"unique_classes":3}"#);
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_symqudit")).arg("nope").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
