//! Variational solver for the discrete L_p dual Minkowski problem.
//!
//! Given atoms `(u_i, μ_i)` on `Ω_{C°}` and exponents `(p, q)`, the solver
//! looks for a C-polytope `A = C ∩ ⋂ {x·u_i ≤ -f_i}` whose (p,q)-th dual
//! curvature measure is `μ`. It minimizes
//!
//! ```text
//! Φ(f) = -log ‖f‖_p + (1/q) log Ṽ_q([f])          q ≠ 0
//! Φ(f) = -log ‖f‖_p + Ẽ([f]) / |Ω_C|              q = 0
//! ```
//!
//! with `‖f‖_p = (Σ μ_i f_i^p)^{1/p}` (replaced by `exp((1/|μ|) Σ μ_i log f_i)`
//! when `p = 0`), then dilates the minimizer so that the measure matches `μ`
//! exactly instead of up to a constant.
//!
//! Iterates live in the log chart `w_i = log f_i`. In that chart every case
//! has the gradient `σ_i - π_i`, where `π_i` is atom `i`'s share of `‖f‖_p^p`
//! and `σ_i` its share of the dual volume (or of `|Ω_C|` when `q = 0`), so the
//! first-order condition reads `σ = π`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cone::{tangent_basis, Cone, UnitVector, Vector};
use crate::error::{Error, Result};
use crate::linalg::{self, dot, gauss_on};
use crate::measures::{pq_masses, pq_measure, region_integrals, Atom, DiscreteMeasure, Domain};
use crate::polytope::{wulff_shape, CPolytope};
use crate::quadrature::{make_grid, QuadratureGrid, MIN_RESOLUTION};

/// Default lower bound on the spherical distance between target atoms and
/// `∂Ω_{C°}`.
pub const DEFAULT_MARGIN: f64 = 1e-6;
/// Iterates with `min f / max f` below this are rejected.
const RATIO_MIN: f64 = 1e-12;
/// Largest change of any `log f_i` in a single step.
const MAX_STEP: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Existence and uniqueness are known.
    Unique,
    /// Existence is known for C-polytopes; uniqueness is not (p > q).
    ExistenceOnly,
    /// Solutions are unique up to dilation (p = q).
    UpToDilation,
    /// Neither existence nor uniqueness is covered by the theory.
    Uncovered,
}

pub fn regime(p: f64, q: f64) -> Regime {
    if p == q {
        Regime::UpToDilation
    } else if p < q && (p <= 0.0 || q != 0.0) {
        Regime::Unique
    } else if p != 0.0 && q != 0.0 {
        Regime::ExistenceOnly
    } else {
        Regime::Uncovered
    }
}

/// A discrete L_p dual Minkowski problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub cone: Cone,
    pub target: DiscreteMeasure,
    pub p: f64,
    pub q: f64,
}

impl Problem {
    pub fn new(cone: Cone, target: DiscreteMeasure, p: f64, q: f64) -> Result<Problem> {
        Problem::with_margin(cone, target, p, q, DEFAULT_MARGIN)
    }

    /// Like [`Problem::new`], requiring every atom to be at spherical distance
    /// at least `margin` from `∂Ω_{C°}`.
    pub fn with_margin(cone: Cone, target: DiscreteMeasure, p: f64, q: f64, margin: f64) -> Result<Problem> {
        if !p.is_finite() {
            return Err(Error::InvalidP { p });
        }
        if !q.is_finite() {
            return Err(Error::Invalid(format!("q must be finite, got {q}")));
        }
        if !(margin > 0.0) {
            return Err(Error::Invalid(format!("interior margin must be positive, got {margin}")));
        }
        if target.domain != Domain::OmegaPolar {
            return Err(Error::Invalid("target atoms must be outer normals in Ω_{C°}".into()));
        }
        target.validate_in(&cone)?;
        for (i, a) in target.atoms.iter().enumerate() {
            let angle = cone.polar_boundary_angle(a.u.as_slice())?;
            if angle < margin {
                return Err(Error::AtomTooClose { index: i, angle });
            }
        }
        Ok(Problem { cone, target, p, q })
    }

    pub fn regime(&self) -> Regime {
        regime(self.p, self.q)
    }

    /// Human-readable caveats about the exponent pair.
    pub fn notices(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.p == 0.0 {
            out.push("p = 0: using the functional -(1/|μ|)∫log f dμ + (1/q)log Ṽ_q (or Ẽ/|Ω_C| for q = 0)".into());
        }
        match self.regime() {
            Regime::Unique => {}
            Regime::ExistenceOnly => {
                out.push("existence holds for C-polytopes; uniqueness is unknown for p > q".into())
            }
            Regime::UpToDilation => out.push("p = q: the solution is determined only up to dilation".into()),
            Regime::Uncovered => out.push(format!("(p, q) = ({}, {}) is not covered by the existence theory", self.p, self.q)),
        }
        out
    }

    fn masses(&self) -> Vec<f64> {
        self.target.masses()
    }

    fn template(&self) -> Result<CPolytope> {
        let atoms: Vec<(UnitVector, f64)> = self.target.atoms.iter().map(|a| (a.u.clone(), 1.0)).collect();
        wulff_shape(&self.cone, &atoms)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRule {
    /// Sufficient-decrease constant of the Armijo test.
    pub armijo: f64,
    /// Step shrink factor per backtrack.
    pub shrink: f64,
    pub max_backtracks: usize,
}

impl Default for StepRule {
    fn default() -> Self {
        StepRule { armijo: 1e-4, shrink: 0.5, max_backtracks: 60 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Rescale every iterate to `Ṽ_q = 1` (`Ẽ = 0` when `q = 0`).
    EveryIteration,
    /// Leave the scale of the iterates alone.
    Off,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub resolution: usize,
    pub seed: u64,
    pub max_iterations: usize,
    /// Convergence threshold on `max_i |σ_i/π_i - 1|`, which is also the
    /// relative atomwise error of the achieved measure.
    pub tol: f64,
    pub step: StepRule,
    /// Initial value `f⁰` of every support number.
    pub initial_value: f64,
    pub normalization: Normalization,
    /// Minimum spherical distance of target atoms from `∂Ω_{C°}`.
    pub margin: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            resolution: 1024,
            seed: 0,
            max_iterations: 1000,
            tol: 1e-9,
            step: StepRule::default(),
            initial_value: 1.0,
            normalization: Normalization::EveryIteration,
            margin: DEFAULT_MARGIN,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.resolution < MIN_RESOLUTION {
            return Err(Error::Invalid(format!("grid resolution must be at least {MIN_RESOLUTION}")));
        }
        let positive = [("tol", self.tol), ("initial value", self.initial_value), ("margin", self.margin)];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        let s = &self.step;
        if !(s.armijo > 0.0 && s.armijo < 0.5 && s.shrink > 0.0 && s.shrink < 1.0 && s.max_backtracks > 0) {
            return Err(Error::Invalid("step rule needs 0 < armijo < 0.5, 0 < shrink < 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Invalid("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub polytope: CPolytope,
    /// The (p,q)-th dual curvature measure of `polytope`, recomputed from
    /// scratch on the solver grid.
    pub achieved: DiscreteMeasure,
    /// `|achieved_i - μ_i| / μ_i`, aligned with the target atoms. When the
    /// solution is only determined up to dilation the target is first scaled
    /// to the achieved total mass.
    pub residuals: Vec<f64>,
    /// Scale ratio used in the final dilation: `‖f‖_p^p / Ṽ_q` for `p, q ≠ 0`,
    /// `‖f‖_p^p / |Ω_C|` for `q = 0` and `|μ| / Ṽ_q` for `p = 0`, all taken at
    /// the normalized minimizer.
    pub tau1: f64,
    pub iterations: usize,
    pub converged: bool,
    pub objective_trace: Vec<f64>,
    /// `max_i |σ_i - π_i|` at the final iterate.
    pub gradient_norm: f64,
    /// Distance from the origin to the solution.
    pub b_distance: f64,
    pub up_to_dilation: bool,
    pub warnings: Vec<String>,
}

impl Solution {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

/// Gradient in the chart `z_i = f_i^p`.
#[derive(Clone, Debug)]
pub struct Gradient {
    pub values: Vec<f64>,
    /// Atoms whose facet carries no mass at `f`.
    pub inactive: Vec<usize>,
}

/// State of the functional at one iterate.
struct Eval {
    phi: f64,
    /// σ - π
    g: Vec<f64>,
    sigma: Vec<f64>,
    pi: Vec<f64>,
    /// `Σ μ_i z_i` (`|μ|` when p = 0)
    norm_p: f64,
    /// Per-atom `(1/n)∫ρ^q`, or region areas when q = 0.
    prim: Vec<f64>,
    /// `Ṽ_q`, or `|Ω_C|` when q = 0.
    total: f64,
    /// `Ẽ` when q = 0.
    entropy: f64,
}

impl Eval {
    fn ratio_error(&self) -> f64 {
        self.sigma.iter().zip(&self.pi).map(|(s, p)| (s / p - 1.0).abs()).fold(0.0, f64::max)
    }

    fn grad_max(&self) -> f64 {
        self.g.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    fn inactive(&self) -> Vec<usize> {
        (0..self.prim.len()).filter(|&i| self.prim[i] <= 0.0).collect()
    }
}

struct Functional<'a> {
    problem: &'a Problem,
    grid: &'a QuadratureGrid,
    template: CPolytope,
    mu: Vec<f64>,
    mass: f64,
}

impl<'a> Functional<'a> {
    fn new(problem: &'a Problem, grid: &'a QuadratureGrid) -> Result<Self> {
        if !grid.cone().approx_eq(&problem.cone, 1e-12) {
            return Err(Error::Invalid("quadrature grid was built for a different cone".into()));
        }
        let mu = problem.masses();
        let mass = linalg::kahan_total(mu.iter().cloned());
        Ok(Functional { problem, grid, template: problem.template()?, mu, mass })
    }

    fn polytope(&self, w: &[f64]) -> Result<CPolytope> {
        let h: Vec<f64> = w.iter().map(|x| -x.exp()).collect();
        self.template.with_support_values(&h)
    }

    fn eval(&self, w: &[f64]) -> Result<Eval> {
        let poly = self.polytope(w)?;
        let q = self.problem.q;
        let sums = region_integrals(&poly, q, self.grid);
        let scale = if q == 0.0 { 1.0 } else { 1.0 / poly.dim() as f64 };
        let prim: Vec<f64> = sums.iter().map(|s| scale * s[0]).collect();
        let entropy = if q == 0.0 { linalg::kahan_total(sums.iter().map(|s| s[1])) } else { 0.0 };
        Ok(self.assemble(w, prim, entropy))
    }

    /// The state after `w ↦ w + c`, using the homogeneity of the integrals
    /// instead of new quadrature.
    fn shifted(&self, e: &Eval, w: &[f64], c: f64) -> Eval {
        let q = self.problem.q;
        if q == 0.0 {
            let entropy = e.entropy + c * e.total;
            self.assemble(w, e.prim.clone(), entropy)
        } else {
            let k = (q * c).exp();
            self.assemble(w, e.prim.iter().map(|a| a * k).collect(), 0.0)
        }
    }

    fn assemble(&self, w: &[f64], prim: Vec<f64>, entropy: f64) -> Eval {
        let (p, q) = (self.problem.p, self.problem.q);
        let total = linalg::kahan_total(prim.iter().cloned());
        let (norm_p, pi, first) = if p == 0.0 {
            let pi: Vec<f64> = self.mu.iter().map(|m| m / self.mass).collect();
            let mean = linalg::kahan_total(self.mu.iter().zip(w).map(|(m, x)| m * x)) / self.mass;
            (self.mass, pi, -mean)
        } else {
            let terms: Vec<f64> = self.mu.iter().zip(w).map(|(m, x)| m * (p * x).exp()).collect();
            let s = linalg::kahan_total(terms.iter().cloned());
            (s, terms.iter().map(|t| t / s).collect(), -s.ln() / p)
        };
        let second = if q == 0.0 { entropy / total } else { total.ln() / q };
        let sigma: Vec<f64> = prim.iter().map(|a| a / total).collect();
        let g = sigma.iter().zip(&pi).map(|(s, p)| s - p).collect();
        Eval { phi: first + second, g, sigma, pi, norm_p, prim, total, entropy }
    }

    /// Constant `c` such that `w + c` is normalized.
    fn normalizing_shift(&self, e: &Eval) -> f64 {
        let q = self.problem.q;
        if q == 0.0 {
            -e.entropy / e.total
        } else {
            -e.total.ln() / q
        }
    }
}

fn log_chart(f: &[f64], problem: &Problem) -> Result<Vec<f64>> {
    if f.len() != problem.target.len() {
        return Err(Error::DimensionMismatch { expected: problem.target.len(), found: f.len() });
    }
    f.iter()
        .enumerate()
        .map(|(i, &x)| if x > 0.0 && x.is_finite() { Ok(x.ln()) } else { Err(Error::NonPositive { index: i, value: x }) })
        .collect()
}

/// `Φ(f)` for `p ≠ 0`.
pub fn objective(f: &[f64], problem: &Problem, grid: &QuadratureGrid) -> Result<f64> {
    if problem.p == 0.0 {
        return Err(Error::InvalidP { p: 0.0 });
    }
    let w = log_chart(f, problem)?;
    Ok(Functional::new(problem, grid)?.eval(&w)?.phi)
}

/// `∂Φ/∂z_i` with `z_i = f_i^p`, for `p ≠ 0`:
/// `(1/p)[-μ_i/‖f‖_p^p + C̃_{p,q}([f], u_i)/Ṽ_q([f])]`, with `J*_p/|Ω_C|` in
/// place of the second term when `q = 0`.
pub fn gradient(f: &[f64], problem: &Problem, grid: &QuadratureGrid) -> Result<Gradient> {
    let p = problem.p;
    if p == 0.0 {
        return Err(Error::InvalidP { p: 0.0 });
    }
    let w = log_chart(f, problem)?;
    let e = Functional::new(problem, grid)?.eval(&w)?;
    let values = e.g.iter().zip(f).map(|(g, fi)| g / (p * fi.powf(p))).collect();
    Ok(Gradient { values, inactive: e.inactive() })
}

/// The functional and its gradient in the log chart `w_i = log f_i`; valid
/// for every `(p, q)`, including `p = 0`.
pub fn objective_log_chart(w: &[f64], problem: &Problem, grid: &QuadratureGrid) -> Result<(f64, Vec<f64>)> {
    if w.len() != problem.target.len() || w.iter().any(|x| !x.is_finite()) {
        return Err(Error::Invalid("log-chart point must be finite and match the atoms".into()));
    }
    let e = Functional::new(problem, grid)?.eval(w)?;
    Ok((e.phi, e.g))
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Solves the problem on a fresh grid built from `config`.
pub fn solve(problem: &Problem, config: &SolverConfig) -> Result<Solution> {
    config.validate()?;
    let grid = make_grid(&problem.cone, config.resolution, config.seed)?;
    solve_on(problem, config, &grid)
}

/// Solves the problem on a given grid.
pub fn solve_on(problem: &Problem, config: &SolverConfig, grid: &QuadratureGrid) -> Result<Solution> {
    config.validate()?;
    let fun = Functional::new(problem, grid)?;
    let (p, q) = (problem.p, problem.q);
    let m = problem.target.len();
    let mut warnings = problem.notices();
    if p == 0.0 && q == 0.0 {
        let area = grid.weight_sum();
        if (fun.mass - area).abs() > 1e-6 * area {
            return Err(Error::Invalid(format!(
                "with p = q = 0 the target mass must equal |Ω_C| = {area}, got {}",
                fun.mass
            )));
        }
    }

    let mut w = vec![config.initial_value.ln(); m];
    let mut e = fun.eval(&w)?;
    let normalize = config.normalization == Normalization::EveryIteration;
    if normalize {
        let c = fun.normalizing_shift(&e);
        w.iter_mut().for_each(|x| *x += c);
        e = fun.shifted(&e, &w, c);
    }
    let mut trace = vec![e.phi];
    let mut hinv: Option<Vec<Vec<f64>>> = None;
    let mut iterations = 0;
    let mut failures = 0;
    let converged_at = |e: &Eval| {
        e.inactive().is_empty()
            && e.ratio_error() <= config.tol
            && e.grad_max() <= config.tol * e.pi.iter().cloned().fold(0.0, f64::max)
    };

    while !converged_at(&e) && iterations < config.max_iterations {
        iterations += 1;
        let h = hinv.get_or_insert_with(|| scaled_identity(m, 0.5 / e.grad_max().max(1e-300)));
        let mut d: Vec<f64> = h.iter().map(|row| -dot(row, &e.g)).collect();
        let mut slope = dot(&d, &e.g);
        if !(slope < 0.0) {
            *h = scaled_identity(m, 0.5 / e.grad_max().max(1e-300));
            d = e.g.iter().map(|g| -g * h[0][0]).collect();
            slope = dot(&d, &e.g);
        }
        let mut alpha = (MAX_STEP / max_abs(&d)).min(1.0);
        let slack = 64.0 * f64::EPSILON * (1.0 + e.phi.abs());
        let mut accepted = None;
        for _ in 0..config.step.max_backtracks {
            let trial: Vec<f64> = w.iter().zip(&d).map(|(x, di)| x + alpha * di).collect();
            let (lo, hi) = trial.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(*x), b.max(*x)));
            if lo - hi >= RATIO_MIN.ln() {
                let t = fun.eval(&trial)?;
                let armijo = t.phi <= e.phi + config.step.armijo * alpha * slope;
                let tie = t.phi <= e.phi + slack && t.grad_max() < e.grad_max();
                if armijo || tie {
                    accepted = Some((trial, t));
                    break;
                }
            }
            alpha *= config.step.shrink;
        }
        let Some((mut w_new, mut e_new)) = accepted else {
            failures += 1;
            hinv = None;
            if failures >= 2 {
                warnings.push("line search stalled".into());
                break;
            }
            continue;
        };
        failures = 0;
        if normalize {
            let c = fun.normalizing_shift(&e_new);
            w_new.iter_mut().for_each(|x| *x += c);
            e_new = fun.shifted(&e_new, &w_new, c);
        }
        // the functional is invariant along (1, …, 1), so the shift does not
        // enter the secant pair
        let s: Vec<f64> = d.iter().map(|di| alpha * di).collect();
        let y: Vec<f64> = e_new.g.iter().zip(&e.g).map(|(a, b)| a - b).collect();
        bfgs_update(hinv.as_mut().expect("initialized above"), &s, &y, iterations == 1);
        w = w_new;
        e = e_new;
        trace.push(e.phi);
    }

    let inactive = e.inactive();
    let converged = converged_at(&e);
    if !inactive.is_empty() {
        warnings.push(format!("atoms {inactive:?} carry no mass at the final iterate"));
    }
    if !converged && iterations >= config.max_iterations {
        warnings.push(format!("iteration budget of {} exhausted", config.max_iterations));
    }

    // final dilation
    let (tau1, lambda, up_to_dilation) = if p == 0.0 && q == 0.0 {
        (1.0, 1.0, true)
    } else if p == 0.0 {
        let tau = fun.mass / e.total;
        (tau, tau.powf(1.0 / q), false)
    } else if q == 0.0 {
        let tau = e.norm_p / e.total;
        (tau, tau.powf(-1.0 / p), false)
    } else if p == q {
        let tau = e.norm_p / e.total;
        if (tau - 1.0).abs() > 1e-6 {
            warnings.push(format!("p = q and the target mass is off by the factor τ = {tau}; solved up to dilation"));
        }
        (tau, 1.0, true)
    } else {
        let tau = e.norm_p / e.total;
        (tau, tau.powf(1.0 / (q - p)), false)
    };
    let w_final: Vec<f64> = w.iter().map(|x| x + lambda.ln()).collect();
    let polytope = fun.polytope(&w_final)?;
    let masses = pq_masses(&polytope, p, q, grid)?;
    let achieved = pq_measure(&polytope, p, q, grid)?;
    let target_scale = if up_to_dilation { linalg::kahan_total(masses.iter().cloned()) / fun.mass } else { 1.0 };
    let residuals = masses
        .iter()
        .zip(&fun.mu)
        .map(|(c, m)| (c - target_scale * m).abs() / (target_scale * m))
        .collect();
    Ok(Solution {
        b_distance: polytope.b_distance(),
        polytope,
        achieved,
        residuals,
        tau1,
        iterations,
        converged,
        objective_trace: trace,
        gradient_norm: e.grad_max(),
        up_to_dilation,
        warnings,
    })
}

fn scaled_identity(m: usize, s: f64) -> Vec<Vec<f64>> {
    (0..m).map(|i| (0..m).map(|j| if i == j { s } else { 0.0 }).collect()).collect()
}

/// Inverse BFGS update; skipped when the curvature condition fails.
fn bfgs_update(h: &mut [Vec<f64>], s: &[f64], y: &[f64], first: bool) {
    let sy = dot(s, y);
    if !(sy > 1e-12 * linalg::norm(s) * linalg::norm(y)) {
        return;
    }
    let m = s.len();
    if first {
        let gamma = sy / dot(y, y);
        for (i, row) in h.iter_mut().enumerate() {
            row.iter_mut().enumerate().for_each(|(j, x)| *x = if i == j { gamma } else { 0.0 });
        }
    }
    let rho = 1.0 / sy;
    let hy: Vec<f64> = h.iter().map(|row| dot(row, y)).collect();
    let yhy = dot(y, &hy);
    for i in 0..m {
        for j in 0..m {
            h[i][j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
        }
    }
}

/// The copolar set `A = {x ∈ C : x·y ≤ -1 for all y ∈ B}` of a C°-polytope
/// `B`, which equals `conv{y_i} + C` with `y_i = v_i / (-h_i)`.
#[derive(Clone, Debug)]
pub struct CopolarSet {
    /// The C°-polytope `B`.
    pub dual: CPolytope,
    pub points: Vec<Vector>,
}

impl CopolarSet {
    pub fn new(dual: CPolytope) -> CopolarSet {
        CopolarSet { points: dual.copolar_points(), dual }
    }

    /// The cone `C` containing the set.
    pub fn cone(&self) -> Cone {
        self.dual.cone().polar()
    }

    /// `h_C(A, u) = max_i y_i·u` for `u ∈ Ω_{C°}`.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        if !self.dual.cone().omega_contains(u) {
            return Err(Error::OutsideDomain);
        }
        Ok(self.points.iter().map(|y| dot(y, u)).fold(f64::NEG_INFINITY, f64::max))
    }

    /// `ρ_C(A, v) = -1 / h_{C°}(B, v)` for `v ∈ Ω_C`.
    pub fn radial(&self, v: &[f64]) -> Result<f64> {
        self.dual.copolar_radial(v)
    }
}

#[derive(Clone, Debug)]
pub struct AlexandrovSolution {
    /// Solution of the q = 0 problem on the polar cone.
    pub dual: Solution,
    pub set: CopolarSet,
    /// `J_p(A, ·) = J*_p(B, ·)`, on `Ω_C`.
    pub measure: DiscreteMeasure,
    /// `Σ|J_p(A, u_i) - ν_i| / Σ ν_i`.
    pub tv_error: f64,
}

/// Solves `J_p(A, ·) = ν` for a measure `ν` on `Ω_C` by solving the q = 0
/// problem on `C°` and taking the copolar set.
pub fn solve_alexandrov(cone: &Cone, nu: &DiscreteMeasure, p: f64, config: &SolverConfig) -> Result<AlexandrovSolution> {
    if nu.domain != Domain::Omega {
        return Err(Error::Invalid("the Alexandrov target must live on Ω_C".into()));
    }
    nu.validate_in(cone)?;
    let polar = cone.polar();
    let problem = Problem::with_margin(polar, nu.retagged(Domain::OmegaPolar), p, 0.0, config.margin)?;
    let mut dual = solve(&problem, config)?;
    if p == 0.0 {
        dual.warnings.push("p = 0 is the classical Alexandrov problem; solved on the p = 0 path".into());
    }
    let grid = make_grid(&problem.cone, config.resolution, config.seed)?;
    let masses = pq_masses(&dual.polytope, p, 0.0, &grid)?;
    let total = nu.total_mass();
    let tv_error = masses.iter().zip(&nu.atoms).map(|(c, a)| (c - a.mass).abs()).sum::<f64>() / total;
    let atoms = nu.atoms.iter().zip(&masses).map(|(a, c)| Atom::new(a.u.clone(), *c)).collect();
    let measure = DiscreteMeasure { domain: Domain::Omega, atoms };
    Ok(AlexandrovSolution { set: CopolarSet::new(dual.polytope.clone()), dual, measure, tv_error })
}

/// Discretizes a density on `Ω_{C°}` restricted to the directions at
/// spherical distance at least `tau` from the boundary.
///
/// In the plane the restricted arc is split into `m` equal cells with atoms at
/// the midpoints. In dimension three roughly `m` cells of a polar grid around
/// the reference direction of `C°` are used, with atoms at the weighted
/// centroids; `seed` rotates the grid. Cells of zero mass are dropped.
pub fn discretize_density<F>(density: F, cone: &Cone, tau: f64, m: usize, seed: u64) -> Result<DiscreteMeasure>
where
    F: Fn(&[f64]) -> f64,
{
    if !(tau > 0.0) {
        return Err(Error::Invalid(format!("margin must be positive, got {tau}")));
    }
    if m == 0 {
        return Err(Error::Invalid("at least one cell is needed".into()));
    }
    let polar = cone.polar();
    let checked = |v: &[f64]| -> Result<f64> {
        let d = density(v);
        if d >= 0.0 && d.is_finite() {
            Ok(d)
        } else {
            Err(Error::Invalid(format!("density must be finite and nonnegative, got {d}")))
        }
    };
    let mut atoms = Vec::new();
    match cone.dim() {
        2 => {
            let (lo, hi) = polar.planar_arc().expect("planar cone");
            let (a, b) = (lo + tau, hi - tau);
            if a >= b {
                return Err(Error::EmptyTruncation { t: tau });
            }
            let width = (b - a) / m as f64;
            for k in 0..m {
                let (t0, t1) = (a + k as f64 * width, a + (k + 1) as f64 * width);
                let mut acc = linalg::KahanSum::default();
                for (t, w) in gauss_on(16, t0, t1) {
                    acc.add(w * checked(&[t.cos(), t.sin()])?);
                }
                let mass = acc.value();
                if mass > 0.0 {
                    atoms.push(Atom::new(UnitVector::polar_angle(0.5 * (t0 + t1)), mass));
                }
            }
        }
        3 => {
            let xi = polar.reference_direction().clone();
            let reach = match polar.circular_params() {
                Some((axis, alpha)) => axis.angle(&xi) + alpha,
                None => polar.generators().iter().map(|g| g.angle(&xi)).fold(0.0, f64::max),
            };
            let (e1, e2) = tangent_basis(xi.as_slice());
            let n_psi = ((m as f64 / 4.0).sqrt().ceil() as usize).max(1);
            let n_phi = 4 * n_psi;
            let phase = ChaCha8Rng::seed_from_u64(seed).random::<f64>() * 2.0 * PI / n_phi as f64;
            let dir = |psi: f64, phi: f64| {
                let (s, c) = psi.sin_cos();
                let (sp, cp) = phi.sin_cos();
                let v: Vec<f64> = (0..3).map(|k| c * xi[k] + s * (cp * e1[k] + sp * e2[k])).collect();
                v
            };
            for i in 0..n_psi {
                let (p0, p1) = (reach * i as f64 / n_psi as f64, reach * (i + 1) as f64 / n_psi as f64);
                for j in 0..n_phi {
                    let (f0, f1) = (phase + 2.0 * PI * j as f64 / n_phi as f64, phase + 2.0 * PI * (j + 1) as f64 / n_phi as f64);
                    let mut mass = linalg::KahanSum::default();
                    let mut centroid = [0.0; 3];
                    for (psi, wp) in gauss_on(6, p0, p1) {
                        for (phi, wf) in gauss_on(6, f0, f1) {
                            let v = dir(psi, phi);
                            let inside = cone.polar_contains(&v) && cone.polar_boundary_angle(&v).is_ok_and(|d| d >= tau);
                            if !inside {
                                continue;
                            }
                            let wgt = wp * wf * psi.sin() * checked(&v)?;
                            mass.add(wgt);
                            centroid.iter_mut().zip(&v).for_each(|(c, x)| *c += wgt * x);
                        }
                    }
                    let mass = mass.value();
                    if mass > 0.0 {
                        atoms.push(Atom::new(UnitVector::from_slice(&centroid)?, mass));
                    }
                }
            }
        }
        dim => return Err(Error::UnsupportedDim { what: "density discretization", dim }),
    }
    if atoms.is_empty() {
        return Err(Error::ZeroMass);
    }
    DiscreteMeasure::new(Domain::OmegaPolar, atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::dual_entropy;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn single(mass: f64) -> DiscreteMeasure {
        let u = UnitVector::from_slice(&[-1.0, -1.0]).unwrap();
        DiscreteMeasure::new(Domain::OmegaPolar, vec![Atom::new(u, mass)]).unwrap()
    }

    fn orthant() -> Cone {
        Cone::orthant(2).unwrap()
    }

    #[test]
    fn objective_examples() {
        let grid = make_grid(&orthant(), 1024, 0).unwrap();
        let pr = Problem::new(orthant(), single(1.0), -1.0, 2.0).unwrap();
        for lambda in [1.0, 0.3, 7.0] {
            assert!(objective(&[lambda], &pr, &grid).unwrap().abs() < 1e-12);
        }
        let pr0 = Problem::new(orthant(), single(1.0), -1.0, 0.0).unwrap();
        let p1 = wulff_shape(&orthant(), &[(single(1.0).atoms[0].u.clone(), 1.0)]).unwrap();
        let e = dual_entropy(&p1, &grid).unwrap();
        assert!((objective(&[1.0], &pr0, &grid).unwrap() - e / FRAC_PI_2).abs() < 1e-13);
        assert!((objective(&[1.0], &pr0, &grid).unwrap() - 0.110_025_372).abs() < 1e-8);
        let pz = Problem::new(orthant(), single(1.0), 0.0, 2.0).unwrap();
        assert!(matches!(objective(&[1.0], &pz, &grid), Err(Error::InvalidP { .. })));
    }

    #[test]
    fn single_atom_recovers_the_corner_triangle() {
        let pr = Problem::new(orthant(), single(1.0), -1.0, 2.0).unwrap();
        let s = solve(&pr, &SolverConfig::default()).unwrap();
        assert!(s.converged);
        assert!((s.polytope.facets()[0].h + 1.0).abs() < 1e-9);
        assert!((s.tau1 - 1.0).abs() < 1e-9);
        let pr = Problem::new(orthant(), single(8.0), -1.0, 2.0).unwrap();
        let s = solve(&pr, &SolverConfig::default()).unwrap();
        assert!((s.polytope.facets()[0].h + 2.0).abs() < 1e-9);
    }

    #[test]
    fn two_facet_round_trip() {
        let c = orthant();
        let u1 = UnitVector::from_slice(&[-1.0, -0.5]).unwrap();
        let u2 = UnitVector::from_slice(&[-0.5, -1.0]).unwrap();
        let truth = wulff_shape(&c, &[(u1, 1.0), (u2, 1.0)]).unwrap();
        let grid = make_grid(&c, 1024, 0).unwrap();
        for (p, q) in [(-1.0, 2.0), (0.0, 1.0), (0.5, 0.0), (-0.5, 0.0), (2.0, 1.0)] {
            let mu = pq_measure(&truth, p, q, &grid).unwrap();
            let pr = Problem::new(c.clone(), mu, p, q).unwrap();
            let s = solve_on(&pr, &SolverConfig::default(), &grid).unwrap();
            assert!(s.converged, "{p} {q}: {:?}", s.warnings);
            for (a, b) in s.polytope.facets().iter().zip(truth.facets()) {
                assert!((a.h - b.h).abs() < 1e-7, "{p} {q}: {} vs {}", a.h, b.h);
            }
            assert!(s.max_residual() < 1e-8);
            assert!(s.objective_trace.windows(2).all(|w| w[1] <= w[0] + 1e-13 * (1.0 + w[0].abs())));
        }
    }

    #[test]
    fn gradient_vanishes_at_the_solution_and_matches_the_chart() {
        let c = orthant();
        let grid = make_grid(&c, 1024, 0).unwrap();
        let pr = Problem::new(c, single(1.0), -1.0, 2.0).unwrap();
        let g = gradient(&[1.0], &pr, &grid).unwrap();
        assert!(g.values[0].abs() < 1e-14 && g.inactive.is_empty());
    }

    #[test]
    fn alexandrov_single_atom() {
        let c = orthant();
        let v = UnitVector::from_slice(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        let nu = DiscreteMeasure::new(Domain::Omega, vec![Atom::new(v, FRAC_PI_2)]).unwrap();
        let a = solve_alexandrov(&c, &nu, -1.0, &SolverConfig::default()).unwrap();
        assert!(a.tv_error < 1e-9);
        assert!((a.measure.total_mass() - FRAC_PI_2).abs() < 1e-9);
        let u = [-FRAC_1_SQRT_2, -FRAC_1_SQRT_2];
        let h = a.set.support(&u).unwrap();
        let rho = a.set.radial(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        assert!(h < 0.0 && rho > 0.0);
    }

    #[test]
    fn p_zero_q_zero_requires_the_full_mass() {
        let pr = Problem::new(orthant(), single(1.0), 0.0, 0.0).unwrap();
        assert!(solve(&pr, &SolverConfig::default()).is_err());
        let pr = Problem::new(orthant(), single(FRAC_PI_2), 0.0, 0.0).unwrap();
        let s = solve(&pr, &SolverConfig::default()).unwrap();
        assert!(s.converged && s.up_to_dilation);
    }

    #[test]
    fn discretized_constant_density() {
        let m = discretize_density(|_: &[f64]| 1.0, &orthant(), 0.1, 8, 0).unwrap();
        assert_eq!(m.len(), 8);
        assert!((m.total_mass() - (FRAC_PI_2 - 0.2)).abs() < 1e-12);
        let far = |v: &[f64]| if v[0] > -0.01 { 1.0 } else { 0.0 };
        assert!(matches!(discretize_density(far, &orthant(), 0.1, 8, 0), Err(Error::ZeroMass)));
        let smooth = |v: &[f64]| 1.0 + v[0] * v[0];
        let a = discretize_density(smooth, &orthant(), 0.1, 16, 0).unwrap().total_mass();
        let b = discretize_density(smooth, &orthant(), 0.1, 32, 0).unwrap().total_mass();
        assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn discretized_density_in_three_dimensions() {
        let c = Cone::orthant(3).unwrap();
        let m = discretize_density(|_: &[f64]| 1.0, &c, 0.05, 64, 3).unwrap();
        assert!(m.validate_in(&c).is_ok());
        assert!(m.total_mass() < PI / 2.0 && m.total_mass() > 0.5);
    }

    #[test]
    fn regimes() {
        assert_eq!(regime(-1.0, 2.0), Regime::Unique);
        assert_eq!(regime(0.0, 1.0), Regime::Unique);
        assert_eq!(regime(-1.0, 0.0), Regime::Unique);
        assert_eq!(regime(2.0, 1.0), Regime::ExistenceOnly);
        assert_eq!(regime(1.0, 1.0), Regime::UpToDilation);
        assert_eq!(regime(1.0, 0.0), Regime::Uncovered);
    }
}
