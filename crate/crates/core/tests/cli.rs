use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn cido(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cido"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn problem(dir: &Path, name: &str, n: usize, polys: &[&str], unchecked: bool) -> PathBuf {
    let path = dir.join(name);
    let body = serde_json::json!({
        "n": n,
        "polynomials": polys,
        "options": { "allow_unchecked_smoothness": unchecked },
    });
    std::fs::write(&path, body.to_string()).unwrap();
    path
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("stderr is JSON")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn basis_of_fermat_cubic() {
    let dir = tempfile::tempdir().unwrap();
    let p = problem(dir.path(), "cubic.json", 2, &["x0^3 + x1^3 + x2^3"], false);
    let o = cido(&["basis", s(&p)]);
    assert!(o.status.success());
    assert_eq!(
        stdout_json(&o),
        serde_json::json!({"total_dim": 2, "per_weight": {"0": ["1"], "1": ["y1*x0*x1*x2"]}})
    );
}

#[test]
fn basis_file_round_trips_through_reps() {
    let dir = tempfile::tempdir().unwrap();
    let p = problem(
        dir.path(),
        "ci22.json",
        3,
        &["x0^2 + x1^2 + x2^2 + x3^2", "x0*x1 + 2*x2*x3"],
        false,
    );
    let basis_path = dir.path().join("basis.json");
    let o = cido(&["basis", s(&p), "--out", s(&basis_path)]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("dimension 2"));
    let basis: Value = serde_json::from_str(&std::fs::read_to_string(&basis_path).unwrap()).unwrap();
    let listed: Vec<Value> = basis["per_weight"]
        .as_object()
        .unwrap()
        .values()
        .flat_map(|v| v.as_array().unwrap().clone())
        .collect();

    for form in ["alpha", "beta", "omega"] {
        let o = cido(&["reps", s(&p), "--form", form, "--basis", s(&basis_path)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let reps = stdout_json(&o);
        assert_eq!(reps["form"], form);
        let order: Vec<Value> = reps["reps"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["monomial"].clone())
            .collect();
        assert_eq!(order, listed);
    }
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p = problem(dir.path(), "cubic.json", 2, &["x0^3 + x1^3 + x2^3"], false);
    let runs: [&[&str]; 6] = [
        &["basis"],
        &["reps", "--form", "omega"],
        &["reduce", "--poly", "y1*x0^3 + 2*y1^2*x0^2*x1^2*x2^2"],
        &["verify", "--check", "homotopy", "--seed", "3", "--cases", "5"],
        &["verify", "--check", "kernel"],
        &["hodge"],
    ];
    for args in runs {
        let mut full: Vec<&str> = args.to_vec();
        full.push(s(&p));
        let a = cido(&full);
        let b = cido(&full);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn reduce_reports_coordinates_and_steps() {
    let dir = tempfile::tempdir().unwrap();
    let p = problem(dir.path(), "cubic.json", 2, &["x0^3 + x1^3 + x2^3"], false);
    let o = cido(&["reduce", s(&p), "--poly", "y1*x0^3"]);
    assert!(o.status.success());
    let r = stdout_json(&o);
    assert_eq!(r["input"], "y1*x0^3");
    assert_eq!(r["coordinates"], serde_json::json!([{"monomial": "1", "coefficient": "-1/3"}]));
    assert!(!r["steps"].as_array().unwrap().is_empty());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cusp = problem(dir.path(), "cusp.json", 2, &["x0^3 - x1^2*x2"], false);

    let o = cido(&["smooth", s(&cusp)]);
    assert_eq!(o.status.code(), Some(1));
    let r = stdout_json(&o);
    assert_eq!(r["smooth"], false);
    assert_eq!(r["witness"], "x2");

    let o = cido(&["basis", s(&cusp)]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "not_certified");

    let bad = problem(dir.path(), "bad.json", 2, &["x0^3 + z"], false);
    let o = cido(&["basis", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "unknown_variable");

    let cubic = problem(dir.path(), "cubic.json", 2, &["x0^3 + x1^3 + x2^3"], false);
    let o = cido(&["reduce", s(&cubic), "--poly", "x0"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "bidegree_mismatch");

    let o = cido(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "usage");

    let o = cido(&["smooth", s(&dir.path().join("missing.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "io");
}

#[test]
fn override_skips_the_smoothness_gate() {
    let dir = tempfile::tempdir().unwrap();
    let p = problem(dir.path(), "cubic.json", 2, &["x0^3 + x1^3 + x2^3"], true);
    let o = cido(&["hodge", s(&p)]);
    assert!(o.status.success());
    assert_eq!(
        stdout_json(&o),
        serde_json::json!({"euler": 0, "middle_betti": 2, "primitive_middle": 2})
    );
}

#[test]
fn comparison_on_the_cubic_passes() {
    let dir = tempfile::tempdir().unwrap();
    let p = problem(dir.path(), "cubic.json", 2, &["x0^3 + x1^3 + x2^3"], false);
    let o = cido(&["verify", "--check", "comparison", s(&p)]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["pass"], true);
    let factors: Vec<&str> = r["report"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["factor"].as_str().unwrap())
        .collect();
    assert_eq!(factors, ["-1", "1"]);
}

#[test]
fn phi_check_and_hodge_slices() {
    let dir = tempfile::tempdir().unwrap();
    let p = problem(dir.path(), "cubic.json", 2, &["x0^3 + x1^3 + x2^3"], false);
    let o = cido(&["verify", "--check", "phi", s(&p)]);
    assert!(o.status.success());
    assert_eq!(stdout_json(&o)["pass"], true);
    let o = cido(&["hodge", "--experimental-hodge-slices", s(&p)]);
    assert!(o.status.success());
    let r = stdout_json(&o);
    assert_eq!(r["primitive_hodge"], serde_json::json!([1, 1]));
    assert_eq!(r["weight_dims"], serde_json::json!([1, 1]));
}
