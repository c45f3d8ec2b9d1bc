use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qwvnb::sample;
use qwvnb::{QMatrix, Quaternion};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qwvnb"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn matrix_file(dir: &TempDir, name: &str, t: &QMatrix) -> PathBuf {
    write(dir, name, &t.to_json())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn analyze_identity_and_nilpotent() {
    let dir = TempDir::new().unwrap();
    let id = matrix_file(&dir, "id.json", &QMatrix::identity(3));
    let o = run(&["analyze", s(&id)]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["normal"], true);
    assert_eq!(v["unitary"], true);
    assert_eq!(v["op_norm"], 1.0);

    let nil = write(&dir, "nil.json", r#"{"n":2,"entries":[[[0,0,0,0],[1,0,0,0]],[[0,0,0,0],[0,0,0,0]]]}"#);
    let v = stdout_json(&run(&["analyze", s(&nil)]));
    assert_eq!(v["normal"], false);
}

#[test]
fn analyze_round_trips_bytes() {
    let dir = TempDir::new().unwrap();
    let mut rng = StdRng::seed_from_u64(7);
    let t = sample::random_matrix(4, &mut rng);
    let src = matrix_file(&dir, "t.json", &t);
    let canon = dir.path().join("canon.json");
    let o = run(&["analyze", s(&src), "--canonical", s(&canon)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&src).unwrap(), std::fs::read_to_string(&canon).unwrap());
}

#[test]
fn malformed_inputs_exit_with_usage_code() {
    let dir = TempDir::new().unwrap();
    let ragged = write(&dir, "r.json", r#"{"n":2,"entries":[[[1,0,0,0]],[[0,0,0,0],[1,0,0,0]]]}"#);
    assert_eq!(run(&["spectrum", s(&ragged)]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "/definitely/missing.json"]).status.code(), Some(2));
    let id = matrix_file(&dir, "id.json", &QMatrix::identity(2));
    assert_eq!(run(&["spectrum", s(&id), "--axis", "0,0,0"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", s(&id), "--axis", "1,2"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["--tol-scale", "-1", "analyze", s(&id)]).status.code(), Some(2));
}

#[test]
fn spectrum_reports_spheres_and_plot_data() {
    let dir = TempDir::new().unwrap();
    let one = matrix_file(&dir, "i.json", &QMatrix::from_diag(&[Quaternion::I]));
    let v = stdout_json(&run(&["spectrum", s(&one)]));
    assert_eq!(v["spheres"].as_array().unwrap().len(), 1);
    assert_eq!(v["spheres"][0]["alpha"], 0.0);
    assert_eq!(v["spheres"][0]["beta"], 1.0);

    let two = matrix_file(&dir, "two.json", &QMatrix::from_diag(&[Quaternion::I, Quaternion::ONE + Quaternion::J]));
    let plot = dir.path().join("plot.csv");
    let o = run(&["spectrum", s(&two), "--oracle", "--plot", s(&plot), "--axis", "0,0,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["spheres"].as_array().unwrap().len(), 2);
    assert_eq!(v["axis"], serde_json::json!([0.0, 0.0, 1.0]));
    let csv = std::fs::read_to_string(plot).unwrap();
    assert_eq!(csv.lines().next(), Some("alpha,beta,mult"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn decompose_documented_example_and_errors() {
    let dir = TempDir::new().unwrap();
    let n = QMatrix::from_diag(&[0.10, 0.20, 0.33].map(Quaternion::real));
    let f = matrix_file(&dir, "n.json", &n);
    let dec = dir.path().join("dec.json");
    let o = run(&["decompose", s(&f), "--epsilon", "0.05", "--out", s(&dec)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert!((v["norms"]["op"].as_f64().unwrap() - 0.005).abs() < 1e-12);
    assert_eq!(v["verify"]["passed"], true);

    assert_eq!(run(&["decompose", s(&f), "--epsilon", "0"]).status.code(), Some(2));
    assert_eq!(run(&["decompose", s(&f), "--epsilon", "0.1", "--mode", "hs"]).status.code(), Some(2));
    assert_eq!(run(&["decompose", s(&f), "--epsilon", "0.1", "--mode", "max"]).status.code(), Some(2));
    let nil = write(&dir, "nil.json", r#"{"n":2,"entries":[[[0,0,0,0],[1,0,0,0]],[[0,0,0,0],[0,0,0,0]]]}"#);
    assert_eq!(run(&["decompose", s(&nil), "--epsilon", "0.1"]).status.code(), Some(2));

    // stored decomposition re-verifies, a tampered copy does not
    assert_eq!(run(&["verify", s(&f), s(&dec)]).status.code(), Some(0));
    let mut d: Value = serde_json::from_str(&std::fs::read_to_string(&dec).unwrap()).unwrap();
    let w = d["d"][1][0].as_f64().unwrap();
    d["d"][1][0] = Value::from(w + 0.1);
    let tampered = write(&dir, "bad.json", &d.to_string());
    assert_eq!(run(&["verify", s(&f), s(&tampered)]).status.code(), Some(4));
}

#[test]
fn decompose_hs_mode_with_curve() {
    let dir = TempDir::new().unwrap();
    let n = QMatrix::from_diag(&[0.1, 0.45, 0.9].map(Quaternion::real));
    let f = matrix_file(&dir, "n.json", &n);
    let curve = write(&dir, "c.json", r#"{"kind":"segment","start":[0,0],"end":[1,0]}"#);
    let o = run(&["decompose", s(&f), "--epsilon", "1e-3", "--mode", "hs", "--curve", s(&curve)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout_json(&o)["norms"]["hs"].as_f64().unwrap() < 1e-3);
}

#[test]
fn truncate_tables() {
    let dir = TempDir::new().unwrap();
    let desc = write(&dir, "d.json", r#"{"diag":{"kind":"linear","params":{"slope":1,"intercept":0}}}"#);
    let o = run(&["truncate", s(&desc), "--sizes", "16,32,64", "--epsilon", "0.1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = String::from_utf8(o.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,op_norm_K,hs_norm_K,prefix_stable"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ends_with(",true")));

    assert_eq!(run(&["truncate", s(&desc), "--epsilon", "0.1"]).status.code(), Some(2));
    assert_eq!(
        run(&["truncate", s(&desc), "--sizes", "4,8", "--epsilon", "0.1", "--mode", "hs"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["truncate", s(&desc), "--sizes", "8,4", "--epsilon", "0.1"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let mut rng = StdRng::seed_from_u64(9);
    let t = sample::random_normal(8, &mut rng);
    let f = matrix_file(&dir, "t.json", &t);
    for args in [
        vec!["spectrum", s(&f)],
        vec!["decompose", s(&f), "--epsilon", "0.01", "--axis", "0.2,-1,0.5"],
        vec!["analyze", s(&f)],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}
