use std::path::Path;
use std::process::{Command, Output};

use coneminq::io::{cone_json, measure_json, polytope_json};
use coneminq::measures::pq_measure;
use coneminq::polytope::wulff_shape;
use coneminq::quadrature::make_grid;
use coneminq::{CPolytope, Cone, UnitVector};

fn coneminq(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coneminq"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn uv(v: &[f64]) -> UnitVector {
    UnitVector::from_slice(v).unwrap()
}

fn sample(n: usize) -> CPolytope {
    let c = Cone::orthant(n).unwrap();
    let atoms: Vec<_> = if n == 2 {
        vec![(uv(&[-1.0, -0.3]), 1.0), (uv(&[-0.3, -1.0]), 1.0)]
    } else {
        vec![(uv(&[-1.0, -0.4, -0.3]), 1.0), (uv(&[-0.3, -1.0, -0.5]), 1.2), (uv(&[-0.4, -0.2, -1.0]), 0.9)]
    };
    wulff_shape(&c, &atoms).unwrap()
}

/// Writes cone.json, poly.json and mu.json (the (p,q) measure of the sample).
fn setup(dir: &Path, n: usize, p: f64, q: f64) -> CPolytope {
    let poly = sample(n);
    let grid = make_grid(poly.cone(), 512, 0).unwrap();
    let mu = pq_measure(&poly, p, q, &grid).unwrap();
    std::fs::write(dir.join("cone.json"), cone_json(poly.cone()).unwrap()).unwrap();
    std::fs::write(dir.join("poly.json"), polytope_json(&poly).unwrap()).unwrap();
    std::fs::write(dir.join("mu.json"), measure_json(&mu).unwrap()).unwrap();
    poly
}

#[test]
fn solve_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    setup(d, 2, -1.0, 2.0);
    let out = coneminq(d, &["solve", "--cone", "cone.json", "--measure", "mu.json", "-p", "-1", "-q", "2", "--grid", "512", "-o", "sol.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(d.join("sol.json.manifest.json").exists());
    let out = coneminq(d, &["verify", "--polytope", "sol.json", "--measure", "mu.json", "-p", "-1", "-q", "2", "--grid", "512"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("max relative atom error"));
}

#[test]
fn verify_rejects_a_wrong_measure() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    setup(d, 2, -1.0, 2.0);
    let mut mu: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("mu.json")).unwrap()).unwrap();
    let m = mu["atoms"][0]["mass"].as_f64().unwrap();
    mu["atoms"][0]["mass"] = (1.5 * m).into();
    std::fs::write(d.join("bad.json"), mu.to_string()).unwrap();
    let out = coneminq(d, &["verify", "--polytope", "poly.json", "--measure", "bad.json", "-p", "-1", "-q", "2", "--grid", "512"]);
    assert_eq!(code(&out), 4);
}

#[test]
fn measure_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    setup(d, 3, 0.5, 1.0);
    let args = ["measure", "--polytope", "poly.json", "-p", "0.5", "-q", "1", "--grid", "256", "--seed", "7"];
    let a = coneminq(d, &args);
    let b = coneminq(d, &args);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let header = String::from_utf8_lossy(&a.stdout).lines().next().unwrap().to_string();
    assert_eq!(header, "u1,u2,u3,mass,error");
}

#[test]
fn malformed_input_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("poly.json"), "{\"cone\": {\"dim\": 2, \"kind\": \"orthant\"}, \"facets\": [{\"u\": [-1, 0.5]").unwrap();
    let out = coneminq(d, &["measure", "--polytope", "poly.json", "-p", "0", "-q", "2"]);
    assert_eq!(code(&out), 2);
    let out = coneminq(d, &["measure", "--polytope", "missing.json", "-p", "0", "-q", "2"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn replay_reproduces_the_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    setup(d, 2, 0.0, 2.0);
    let out = coneminq(d, &["volume", "--polytope", "poly.json", "-q", "2", "-o", "vol.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = coneminq(d, &["replay", "vol.json.manifest.json", "-o", "again.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read(d.join("vol.json")).unwrap(), std::fs::read(d.join("again.json")).unwrap());
}

#[test]
fn export_writes_a_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let poly = setup(d, 3, 0.0, 3.0);
    let out = coneminq(d, &["export", "--polytope", "poly.json", "-t", "3", "-o", "mesh.obj"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(d.join("mesh.obj")).unwrap();
    let groups = text.lines().filter(|l| l.starts_with("g ")).count();
    assert_eq!(groups, poly.len());
    assert!(text.lines().any(|l| l.starts_with("f ")));

    setup(d, 2, 0.0, 2.0);
    let out = coneminq(d, &["export", "--polytope", "poly.json", "-t", "3", "-o", "line.csv"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(d.join("line.csv")).unwrap();
    assert_eq!(text.lines().next().unwrap(), "facet,x,y");
}

#[test]
fn residual_of_an_exact_solution() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (p, q) = (-1.0f64, 1.0f64);
    let psi = |t: f64| t - 1.25 * std::f64::consts::PI;
    let h = |t: f64| -2.0 * std::f64::consts::SQRT_2 * psi(t).cos() + 0.5 / psi(t).cos();
    let dh = |t: f64| 2.0 * std::f64::consts::SQRT_2 * psi(t).sin() + 0.5 * psi(t).tan() / psi(t).cos();
    let d2h = |t: f64| psi(t).cos().powi(-3) - h(t);
    let (mut support, mut density) = (String::from("phi,h\n"), String::from("phi,f\n"));
    let count = 1024;
    for k in 0..count {
        let t = std::f64::consts::PI + 0.01 + (0.5 * std::f64::consts::PI - 0.02) * k as f64 / (count - 1) as f64;
        let f = coneminq::monge_ampere::manufactured_density(h(t), dh(t), d2h(t), p, q);
        support.push_str(&format!("{t},{}\n", h(t)));
        density.push_str(&format!("{t},{f}\n"));
    }
    std::fs::write(d.join("h.csv"), support).unwrap();
    std::fs::write(d.join("f.csv"), density).unwrap();
    let out = coneminq(d, &["residual", "--support", "h.csv", "--density", "f.csv", "-p", "-1", "-q", "1", "--tol", "1e-6"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("boundary limit: false"));
    let out = coneminq(d, &["residual", "--support", "h.csv", "--density", "f.csv", "-p", "-1", "-q", "2", "--tol", "1e-6"]);
    assert_eq!(code(&out), 4);
}
