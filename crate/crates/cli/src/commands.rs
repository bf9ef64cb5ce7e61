use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use coneminq::io::{self, Loaded};
use coneminq::measures::{dual_entropy, dual_volume, pq_masses, pq_measure, pq_measure_boundary};
use coneminq::monge_ampere::{boundary_limit_check, residual, SupportProfile};
use coneminq::quadrature::make_grid;
use coneminq::solver::{solve, Problem, SolverConfig};
use coneminq::{CPolytope, DiscreteMeasure, Domain};
use serde_json::{json, Map, Value};

use crate::args::{Cli, Command, ExportArgs, GridArgs, MeasureArgs, ReplayArgs, ResidualArgs, SolveArgs, VerifyArgs, VolumeArgs};
use crate::files::{manifest_path, read_columns, write_atomic, RunManifest};

/// Directions closer than this are the same atom when comparing measures.
const MATCH_ANGLE: f64 = 1e-9;

#[derive(Debug)]
pub enum Failure {
    Input(String),
    NotConverged(String),
    Verification(String),
    Runtime(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Runtime(_) => 1,
            Failure::Input(_) => 2,
            Failure::NotConverged(_) => 3,
            Failure::Verification(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "input error: {m}"),
            Failure::NotConverged(m) => write!(f, "not converged: {m}"),
            Failure::Verification(m) => write!(f, "verification failed: {m}"),
            Failure::Runtime(m) => write!(f, "{m}"),
        }
    }
}

impl From<coneminq::Error> for Failure {
    fn from(e: coneminq::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

pub fn run(command: Command, argv: Vec<String>) -> Outcome {
    match command {
        Command::Solve(a) => cmd_solve(a, argv),
        Command::Measure(a) => cmd_measure(a, argv),
        Command::Volume(a) => cmd_volume(a, argv),
        Command::Verify(a) => cmd_verify(a, argv),
        Command::Residual(a) => cmd_residual(a, argv),
        Command::Export(a) => cmd_export(a, argv),
        Command::Replay(a) => cmd_replay(a),
    }
}

fn warn_all<T>(loaded: Loaded<T>) -> T {
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    loaded.value
}

fn write_output(path: &Path, contents: &str) -> Outcome {
    write_atomic(path, contents.as_bytes()).map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))
}

/// Writes `contents` to `out` and the run manifest next to it.
fn emit(out: &Path, contents: &str, command: &str, argv: Vec<String>, inputs: Vec<PathBuf>, parameters: Map<String, Value>, start: Instant) -> Outcome {
    write_output(out, contents)?;
    let manifest = RunManifest::new(command, argv, inputs, parameters, start.elapsed());
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| Failure::Runtime(e.to_string()))? + "\n";
    write_output(&manifest_path(out), &text)
}

fn grid_params(g: &GridArgs) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("grid".into(), json!(g.grid));
    m.insert("seed".into(), json!(g.seed));
    m
}

fn cmd_solve(a: SolveArgs, argv: Vec<String>) -> Outcome {
    let start = Instant::now();
    let cone = warn_all(io::load_cone(&a.cone)?);
    let target = warn_all(io::load_measure(&a.measure)?);
    let (p, q) = (a.exponents.p, a.exponents.q);
    let problem = Problem::with_margin(cone, target, p, q, a.tau)?;
    let config = SolverConfig {
        resolution: a.grid.grid,
        seed: a.grid.seed,
        max_iterations: a.max_iter,
        tol: a.tol,
        margin: a.tau,
        ..SolverConfig::default()
    };
    let solution = solve(&problem, &config)?;
    for w in &solution.warnings {
        eprintln!("warning: {w}");
    }
    let text = io::solution_json(&solution)?;
    let mut params = grid_params(&a.grid);
    params.insert("p".into(), json!(p));
    params.insert("q".into(), json!(q));
    params.insert("tol".into(), json!(a.tol));
    params.insert("tau".into(), json!(a.tau));
    params.insert("max_iter".into(), json!(a.max_iter));
    emit(&a.out, &text, "solve", argv, vec![a.cone, a.measure], params, start)?;
    println!(
        "converged: {}\niterations: {}\nmax relative residual: {}\ntau1: {}",
        solution.converged,
        solution.iterations,
        solution.max_residual(),
        solution.tau1
    );
    if solution.converged {
        Ok(())
    } else {
        Err(Failure::NotConverged(format!("best iterate written to {}", a.out.display())))
    }
}

fn load_polytope(path: &Path) -> Result<CPolytope, Failure> {
    Ok(warn_all(io::load_polytope(path)?))
}

fn measure_csv(m: &DiscreteMeasure, dim: usize) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (1..=dim).map(|k| format!("u{k}")).collect();
    header.extend(["mass".to_string(), "error".to_string()]);
    let csv_err = |e: csv::Error| Failure::Runtime(e.to_string());
    w.write_record(&header).map_err(csv_err)?;
    for a in &m.atoms {
        let mut row: Vec<String> = a.u.iter().map(|x| x.to_string()).collect();
        row.push(a.mass.to_string());
        row.push(a.error.map(|e| e.to_string()).unwrap_or_default());
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Runtime(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Runtime(e.to_string()))
}

fn cmd_measure(a: MeasureArgs, argv: Vec<String>) -> Outcome {
    let start = Instant::now();
    let poly = load_polytope(&a.polytope)?;
    let (p, q) = (a.exponents.p, a.exponents.q);
    let measure = if a.boundary {
        pq_measure_boundary(&poly, p, q)?
    } else {
        pq_measure(&poly, p, q, &make_grid(poly.cone(), a.grid.grid, a.grid.seed)?)?
    };
    print!("{}", measure_csv(&measure, poly.dim())?);
    if let Some(out) = &a.out {
        let mut params = grid_params(&a.grid);
        params.insert("p".into(), json!(p));
        params.insert("q".into(), json!(q));
        params.insert("boundary".into(), json!(a.boundary));
        emit(out, &io::measure_json(&measure)?, "measure", argv, vec![a.polytope.clone()], params, start)?;
    }
    Ok(())
}

fn cmd_volume(a: VolumeArgs, argv: Vec<String>) -> Outcome {
    let start = Instant::now();
    let poly = load_polytope(&a.polytope)?;
    let grid = make_grid(poly.cone(), a.grid.grid, a.grid.seed)?;
    let mut report = Map::new();
    report.insert("q".into(), json!(a.q));
    if a.q == 0.0 {
        report.insert("dual_entropy".into(), json!(dual_entropy(&poly, &grid)?));
    } else {
        report.insert("dual_volume".into(), json!(dual_volume(&poly, a.q, &grid)?));
    }
    report.insert("omega_area".into(), json!(poly.cone().omega_area()));
    if let Ok(v) = poly.coconvex_volume() {
        report.insert("coconvex_volume".into(), json!(v));
    }
    let text = serde_json::to_string_pretty(&report).map_err(|e| Failure::Runtime(e.to_string()))? + "\n";
    print!("{text}");
    if let Some(out) = &a.out {
        let mut params = grid_params(&a.grid);
        params.insert("q".into(), json!(a.q));
        emit(out, &text, "volume", argv, vec![a.polytope.clone()], params, start)?;
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs, argv: Vec<String>) -> Outcome {
    let start = Instant::now();
    let poly = load_polytope(&a.polytope)?;
    let target = warn_all(io::load_measure(&a.measure)?);
    if target.domain != Domain::OmegaPolar {
        return Err(Failure::Input("the measure must live on omega_polar".into()));
    }
    let (p, q) = (a.exponents.p, a.exponents.q);
    let grid = make_grid(poly.cone(), a.grid.grid, a.grid.seed)?;
    let masses = pq_masses(&poly, p, q, &grid)?;
    let total: f64 = masses.iter().sum();
    let mut matched = vec![false; poly.len()];
    let mut errors = Vec::with_capacity(target.len());
    let mut problems = Vec::new();
    for (i, atom) in target.atoms.iter().enumerate() {
        match poly.facets().iter().position(|f| f.u.angle(&atom.u) <= MATCH_ANGLE) {
            Some(j) => {
                matched[j] = true;
                errors.push((masses[j] - atom.mass).abs() / atom.mass);
            }
            None => {
                problems.push(format!("atom {i} has no facet with that normal"));
                errors.push(f64::INFINITY);
            }
        }
    }
    for (j, m) in masses.iter().enumerate() {
        if !matched[j] && *m > a.tol * total {
            problems.push(format!("facet {j} carries mass {m} that the measure does not have"));
        }
    }
    let max_error = errors.iter().cloned().fold(0.0, f64::max);
    let passed = problems.is_empty() && max_error <= a.tol;
    println!("max relative atom error: {max_error}");
    if let Some(out) = &a.out {
        let report = json!({ "max_relative_error": max_error, "per_atom": errors, "passed": passed, "problems": problems });
        let text = serde_json::to_string_pretty(&report).map_err(|e| Failure::Runtime(e.to_string()))? + "\n";
        let mut params = grid_params(&a.grid);
        params.insert("p".into(), json!(p));
        params.insert("q".into(), json!(q));
        params.insert("tol".into(), json!(a.tol));
        emit(out, &text, "verify", argv, vec![a.polytope.clone(), a.measure.clone()], params, start)?;
    }
    if passed {
        Ok(())
    } else if !problems.is_empty() {
        Err(Failure::Verification(problems.join("; ")))
    } else {
        Err(Failure::Verification(format!("max relative atom error {max_error} exceeds {}", a.tol)))
    }
}

fn cmd_residual(a: ResidualArgs, argv: Vec<String>) -> Outcome {
    let start = Instant::now();
    let (phi, h) = read_columns(&a.support, "phi", "h").map_err(Failure::Input)?;
    let (phi_f, f) = read_columns(&a.density, "phi", "f").map_err(Failure::Input)?;
    if phi.len() != phi_f.len() || phi.iter().zip(&phi_f).any(|(x, y)| (x - y).abs() > 1e-12 * (1.0 + x.abs())) {
        return Err(Failure::Input("support and density must be sampled at the same angles".into()));
    }
    let mut profile = SupportProfile::new(phi.clone(), h)?;
    if let Some(path) = &a.cone {
        profile = profile.on_arc(&warn_all(io::load_cone(path)?))?;
    }
    let (p, q) = (a.exponents.p, a.exponents.q);
    let lookup = |t: f64| phi.binary_search_by(|x| x.total_cmp(&t)).map(|k| f[k]).unwrap_or(f64::NAN);
    let r = residual(&profile, lookup, p, q)?;
    println!("max residual: {}", r.max_abs);
    println!("boundary limit: {}", boundary_limit_check(&profile));
    if let Some(out) = &a.out {
        let mut text = String::from("phi,residual\n");
        for (t, v) in phi.iter().zip(&r.values) {
            writeln!(text, "{t},{v}").expect("string write");
        }
        let mut params = Map::new();
        params.insert("p".into(), json!(p));
        params.insert("q".into(), json!(q));
        let mut inputs = vec![a.support.clone(), a.density.clone()];
        inputs.extend(a.cone.clone());
        emit(out, &text, "residual", argv, inputs, params, start)?;
    }
    match a.tol {
        Some(tol) if !(r.max_abs <= tol) => Err(Failure::Verification(format!("max residual {} exceeds {tol}", r.max_abs))),
        _ => Ok(()),
    }
}

fn cmd_export(a: ExportArgs, argv: Vec<String>) -> Outcome {
    let start = Instant::now();
    let poly = load_polytope(&a.polytope)?;
    let pieces = poly.truncated_facets(a.t)?;
    let mut text = String::new();
    if poly.dim() == 3 {
        writeln!(text, "# boundary facets truncated at t = {}", a.t).expect("string write");
        let mut next = 1;
        for (index, verts) in &pieces {
            writeln!(text, "g facet{index}").expect("string write");
            for v in verts {
                writeln!(text, "v {} {} {}", v[0], v[1], v[2]).expect("string write");
            }
            for k in 1..verts.len() - 1 {
                writeln!(text, "f {} {} {}", next, next + k, next + k + 1).expect("string write");
            }
            next += verts.len();
        }
    } else {
        text.push_str("facet,x,y\n");
        for (index, verts) in &pieces {
            for v in verts {
                writeln!(text, "{index},{},{}", v[0], v[1]).expect("string write");
            }
        }
    }
    let mut params = Map::new();
    params.insert("t".into(), json!(a.t));
    emit(&a.out, &text, "export", argv, vec![a.polytope.clone()], params, start)
}

/// Replaces the value of `-o`/`--out` in a recorded argument list.
fn override_output(argv: &[String], out: &Path) -> Vec<String> {
    let value = out.display().to_string();
    let mut result = Vec::with_capacity(argv.len() + 2);
    let mut replaced = false;
    let mut iter = argv.iter();
    while let Some(arg) = iter.next() {
        if arg == "-o" || arg == "--out" {
            result.push(arg.clone());
            iter.next();
            result.push(value.clone());
            replaced = true;
        } else if arg.starts_with("--out=") {
            result.push(format!("--out={value}"));
            replaced = true;
        } else {
            result.push(arg.clone());
        }
    }
    if !replaced {
        result.extend(["-o".to_string(), value]);
    }
    result
}

fn cmd_replay(a: ReplayArgs) -> Outcome {
    let text = std::fs::read_to_string(&a.manifest)
        .map_err(|e| Failure::Input(format!("{}: {e}", a.manifest.display())))?;
    let manifest: RunManifest = io::parse(&text)?;
    let argv = match &a.out {
        Some(out) => override_output(&manifest.argv, out),
        None => manifest.argv.clone(),
    };
    let cli = Cli::try_parse_from(std::iter::once("coneminq".to_string()).chain(argv.iter().cloned()))
        .map_err(|e| Failure::Input(format!("manifest arguments: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(Failure::Input("a manifest cannot record a replay".into()));
    }
    run(cli.command, argv)
}
