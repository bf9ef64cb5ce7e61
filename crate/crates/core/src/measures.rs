//! Dual volumes, dual entropy and (p,q)-th dual curvature measures of
//! C-polytopes.
//!
//! For a C-polytope with facets `(u_i, h_i)` the (p,q)-th dual curvature
//! measure is the discrete measure with masses
//!
//! ```text
//! c_i = (1/n) (-h_i)^{-p} ∫_{α*(u_i)} ρ(v)^q dv      (q ≠ 0)
//! c_i =       (-h_i)^{-p} ∫_{α*(u_i)} dv             (q = 0)
//! ```
//!
//! where `α*(u_i) ⊂ Ω_C` is the set of directions whose radial boundary point
//! lies on facet `i`. The same masses can be written as integrals over the
//! facets themselves, `(1/n)(-h_i)^{1-p} ∫_{F_i} |x|^{q-n} dH^{n-1}`, which
//! gives an independent second path ([`pq_measure_boundary`]).

use serde::{Deserialize, Serialize};

use crate::cone::{Cone, UnitVector, Vector};
use crate::error::{Error, Result};
use crate::linalg::{self, dot, gauss_on, triangle_rule};
use crate::polytope::{CPolytope, DUPLICATE_ANGLE};
use crate::quadrature::{sphere_area, QuadratureGrid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// Directions in `Ω_{C°}`: outer normals.
    OmegaPolar,
    /// Directions in `Ω_C`.
    Omega,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub u: UnitVector,
    pub mass: f64,
    /// Estimated absolute quadrature error of `mass`, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<f64>,
}

impl Atom {
    pub fn new(u: UnitVector, mass: f64) -> Atom {
        Atom { u, mass, error: None }
    }
}

/// A finite sum of weighted point masses on the sphere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    pub domain: Domain,
    pub atoms: Vec<Atom>,
}

impl DiscreteMeasure {
    /// Validates positivity, finiteness and distinctness of the atoms.
    pub fn new(domain: Domain, atoms: Vec<Atom>) -> Result<DiscreteMeasure> {
        let m = DiscreteMeasure { domain, atoms };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.atoms.is_empty() {
            return Err(Error::ZeroMass);
        }
        let dim = self.atoms[0].u.dim();
        for (i, a) in self.atoms.iter().enumerate() {
            if a.u.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: a.u.dim() });
            }
            if !(a.mass > 0.0 && a.mass.is_finite()) {
                return Err(Error::NonPositive { index: i, value: a.mass });
            }
        }
        for i in 0..self.atoms.len() {
            for j in i + 1..self.atoms.len() {
                if self.atoms[i].u.angle(&self.atoms[j].u) <= DUPLICATE_ANGLE {
                    return Err(Error::DuplicateDirection { first: i, second: j });
                }
            }
        }
        Ok(())
    }

    /// Checks that every atom lies strictly inside the tagged domain of `cone`.
    pub fn validate_in(&self, cone: &Cone) -> Result<()> {
        self.validate()?;
        for (i, a) in self.atoms.iter().enumerate() {
            let inside = match self.domain {
                Domain::OmegaPolar => cone.polar_contains(a.u.as_slice()),
                Domain::Omega => cone.omega_contains(a.u.as_slice()),
            };
            if !inside {
                return Err(Error::InvalidDirection { index: i });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        linalg::kahan_total(self.atoms.iter().map(|a| a.mass))
    }

    pub fn masses(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.mass).collect()
    }

    /// The same atoms under a different domain tag.
    pub fn retagged(&self, domain: Domain) -> DiscreteMeasure {
        DiscreteMeasure { domain, atoms: self.atoms.clone() }
    }

    /// `λ·μ`.
    pub fn scaled(&self, lambda: f64) -> DiscreteMeasure {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom { u: a.u.clone(), mass: lambda * a.mass, error: a.error.map(|e| lambda * e) })
            .collect();
        DiscreteMeasure { domain: self.domain, atoms }
    }
}

fn check_grid(p: &CPolytope, grid: &QuadratureGrid) -> Result<()> {
    if !grid.cone().approx_eq(p.cone(), 1e-12) {
        return Err(Error::Invalid("quadrature grid was built for a different cone".into()));
    }
    Ok(())
}

/// The q-th dual volume `(1/n) ∫_{Ω_C} ρ^q`.
pub fn dual_volume(p: &CPolytope, q: f64, grid: &QuadratureGrid) -> Result<f64> {
    if q == 0.0 {
        return Err(Error::Invalid("dual volume needs q ≠ 0; use dual_entropy for q = 0".into()));
    }
    check_grid(p, grid)?;
    let sums = grid.region_sums(p, |_, rho| [rho.powf(q)]);
    Ok(linalg::kahan_total(sums.iter().map(|s| s[0])) / p.dim() as f64)
}

/// The dual entropy `∫_{Ω_C} log ρ`.
pub fn dual_entropy(p: &CPolytope, grid: &QuadratureGrid) -> Result<f64> {
    check_grid(p, grid)?;
    let sums = grid.region_sums(p, |_, rho| [rho.ln()]);
    Ok(linalg::kahan_total(sums.iter().map(|s| s[0])))
}

/// Per-facet `[∫ ρ^q, ∫ log ρ]` over the regions of the radial Gauss map
/// (`∫ 1` in place of `∫ ρ^q` when `q = 0`).
pub(crate) fn region_integrals(p: &CPolytope, q: f64, grid: &QuadratureGrid) -> Vec<[f64; 2]> {
    if q == 0.0 {
        grid.region_sums(p, |_, rho| [1.0, rho.ln()])
    } else {
        grid.region_sums(p, |_, rho| [rho.powf(q), rho.ln()])
    }
}

fn masses_from_integrals(p: &CPolytope, pe: f64, q: f64, integrals: &[f64]) -> Vec<f64> {
    let scale = if q == 0.0 { 1.0 } else { 1.0 / p.dim() as f64 };
    p.facets()
        .iter()
        .zip(integrals)
        .map(|(f, s)| scale * (-f.h).powf(-pe) * s)
        .collect()
}

/// Masses `c_i` of the (p,q)-th dual curvature measure, aligned with the
/// facets (inactive facets get zero).
pub fn pq_masses(p: &CPolytope, pe: f64, q: f64, grid: &QuadratureGrid) -> Result<Vec<f64>> {
    check_grid(p, grid)?;
    let sums = if q == 0.0 {
        grid.region_sums(p, |_, _| [1.0])
    } else {
        grid.region_sums(p, |_, rho| [rho.powf(q)])
    };
    let integrals: Vec<f64> = sums.iter().map(|s| s[0]).collect();
    Ok(masses_from_integrals(p, pe, q, &integrals))
}

/// Per-atom error estimates for [`pq_masses`]: the change against a coarser
/// grid for deterministic schemes, three standard deviations for Monte Carlo.
pub fn pq_mass_errors(p: &CPolytope, pe: f64, q: f64, grid: &QuadratureGrid) -> Result<Vec<f64>> {
    let fine = pq_masses(p, pe, q, grid)?;
    if let Some(coarse) = grid.coarsened() {
        let coarse = pq_masses(p, pe, q, &coarse)?;
        return Ok(fine.iter().zip(&coarse).map(|(a, b)| (a - b).abs()).collect());
    }
    let draws = grid.draws().expect("Monte Carlo grid") as f64;
    let n = p.dim();
    let sq = if q == 0.0 {
        grid.region_sums(p, |_, _| [1.0])
    } else {
        grid.region_sums(p, |_, rho| [rho.powf(2.0 * q)])
    };
    let second: Vec<f64> = sq.iter().map(|s| s[0]).collect();
    let second = masses_from_integrals(p, 2.0 * pe, 0.0, &second);
    let scale = if q == 0.0 { 1.0 } else { 1.0 / n as f64 };
    Ok(fine
        .iter()
        .zip(&second)
        .map(|(c, s2)| {
            // E[Y²] = |S| ∫ g², estimator variance Var(Y)/N
            let ey2 = sphere_area(n) * s2 * scale * scale;
            3.0 * ((ey2 - c * c).max(0.0) / draws).sqrt()
        })
        .collect())
}

/// The (p,q)-th dual curvature measure on `Ω_{C°}`, with error estimates.
/// Facets carrying no mass are dropped.
pub fn pq_measure(p: &CPolytope, pe: f64, q: f64, grid: &QuadratureGrid) -> Result<DiscreteMeasure> {
    let masses = pq_masses(p, pe, q, grid)?;
    let errors = pq_mass_errors(p, pe, q, grid)?;
    Ok(to_measure(p, &masses, &errors))
}

fn to_measure(p: &CPolytope, masses: &[f64], errors: &[f64]) -> DiscreteMeasure {
    let total: f64 = masses.iter().sum();
    let atoms = p
        .facets()
        .iter()
        .zip(masses.iter().zip(errors))
        .filter(|(_, (m, _))| **m > 1e-15 * total)
        .map(|(f, (m, e))| Atom { u: f.u.clone(), mass: *m, error: Some(*e) })
        .collect();
    DiscreteMeasure { domain: Domain::OmegaPolar, atoms }
}

/// Segment panels and triangle subdivision levels of the boundary path; the
/// error estimate compares against half of each.
const BOUNDARY_PANELS: usize = 64;
const BOUNDARY_LEVEL: usize = 5;

/// The (p,q)-th dual curvature measure computed from the facets:
/// `c_i = (1/n)(-h_i)^{1-p} ∫_{F_i} |x|^{q-n} dH^{n-1}` (without `1/n` when
/// `q = 0`). Available for n ≤ 3 and polyhedral cones.
pub fn pq_measure_boundary(p: &CPolytope, pe: f64, q: f64) -> Result<DiscreteMeasure> {
    let geo = p.facet_geometry()?;
    let n = p.dim();
    let scale = if q == 0.0 { 1.0 } else { 1.0 / n as f64 };
    let exponent = q - n as f64;
    let integrand = |x: &[f64]| dot(x, x).sqrt().powf(exponent);
    let mut masses = vec![0.0; p.len()];
    let mut errors = vec![0.0; p.len()];
    for g in geo.iter().filter(|g| g.is_active()) {
        let (fine, coarse) = if n == 2 {
            (
                segment_integral(&g.vertices[0], &g.vertices[1], BOUNDARY_PANELS, &integrand),
                segment_integral(&g.vertices[0], &g.vertices[1], BOUNDARY_PANELS / 2, &integrand),
            )
        } else {
            (
                polygon_integral(&g.vertices, BOUNDARY_LEVEL, &integrand),
                polygon_integral(&g.vertices, BOUNDARY_LEVEL - 1, &integrand),
            )
        };
        let factor = scale * (-p.facets()[g.index].h).powf(1.0 - pe);
        masses[g.index] = factor * fine;
        errors[g.index] = factor * (fine - coarse).abs();
    }
    Ok(to_measure(p, &masses, &errors))
}

fn segment_integral<F: Fn(&[f64]) -> f64>(a: &Vector, b: &Vector, panels: usize, f: &F) -> f64 {
    let len = (b - a).norm();
    let mut acc = linalg::KahanSum::default();
    for k in 0..panels {
        let (s0, s1) = (k as f64 / panels as f64, (k + 1) as f64 / panels as f64);
        for (s, w) in gauss_on(8, s0, s1) {
            let x = a + (b - a) * s;
            acc.add(len * w * f(x.as_slice()));
        }
    }
    acc.value()
}

fn polygon_integral<F: Fn(&[f64]) -> f64>(poly: &[Vector], level: usize, f: &F) -> f64 {
    let rule = triangle_rule();
    let mut acc = linalg::KahanSum::default();
    for k in 1..poly.len() - 1 {
        let mut tris = vec![[poly[0].clone(), poly[k].clone(), poly[k + 1].clone()]];
        for _ in 0..level {
            tris = tris
                .iter()
                .flat_map(|[a, b, c]| {
                    let (ab, bc, ca) = ((a + b) * 0.5, (b + c) * 0.5, (c + a) * 0.5);
                    [
                        [a.clone(), ab.clone(), ca.clone()],
                        [ab.clone(), b.clone(), bc.clone()],
                        [ca.clone(), bc.clone(), c.clone()],
                        [ab, bc, ca],
                    ]
                })
                .collect();
        }
        for [a, b, c] in &tris {
            let cr = linalg::cross3((b - a).as_slice(), (c - a).as_slice());
            let area = 0.5 * linalg::norm(&cr);
            for (bc, w) in &rule {
                let x = a * bc[0] + b * bc[1] + c * bc[2];
                acc.add(area * w * f(x.as_slice()));
            }
        }
    }
    acc.value()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Finiteness {
    Finite,
    Diverging,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct FinitenessReport {
    pub verdict: Finiteness,
    /// Estimates of `(1/n)∫ρ^q` (of `∫ log ρ` when `q = 0`) on successively
    /// larger inner regions or finer grids.
    pub estimates: Vec<f64>,
}

const CAUCHY_TOL: f64 = 1e-4;
const MAX_PLANAR_LEVELS: usize = 24;
const MAX_SPATIAL_LEVELS: usize = 5;

/// Probes whether `(1/n)∫_{Ω_C} ρ^q` is finite for a set given only through
/// its radial function.
///
/// In the plane the integral is taken over `[lo + ε_k, hi - ε_k]` with
/// `ε_k = (hi - lo)/2 · 4^{-k}`, each layer integrated accurately, so the
/// sequence tracks the behaviour of the integrand at the endpoints. In
/// dimension three the estimates come from uniformly refined grids.
///
/// The verdict is `Finite` when the estimates settle to relative `1e-4`
/// (directly, or after a geometric tail bound), `Diverging` when the last
/// three increments are positive and do not shrink (ratio ≥ 0.9), and
/// `Inconclusive` otherwise.
pub fn is_cq_close<F>(cone: &Cone, radial: F, q: f64, levels: usize) -> Result<FinitenessReport>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if levels < 4 {
        return Err(Error::Invalid("the finiteness probe needs at least four levels".into()));
    }
    let g = |v: &[f64]| {
        let r = radial(v);
        if q == 0.0 {
            r.ln()
        } else {
            r.powf(q) / cone.dim() as f64
        }
    };
    let estimates = match cone.dim() {
        2 => planar_estimates(cone, &g, levels.min(MAX_PLANAR_LEVELS)),
        3 => {
            let mut out = Vec::new();
            for k in 0..levels.min(MAX_SPATIAL_LEVELS) {
                let grid = crate::quadrature::make_grid(cone, 64 << (2 * k), 0)?;
                out.push(grid.integrate(&g));
            }
            out
        }
        dim => return Err(Error::UnsupportedDim { what: "finiteness probe", dim }),
    };
    Ok(FinitenessReport { verdict: classify(&estimates), estimates })
}

fn planar_estimates<G: Fn(&[f64]) -> f64>(cone: &Cone, g: &G, levels: usize) -> Vec<f64> {
    let (lo, hi) = cone.planar_arc().expect("planar cone");
    let half = 0.5 * (hi - lo);
    let eps = |k: usize| half * 0.25f64.powi(k as i32);
    // directions at offset s from either endpoint, by angle addition so that
    // tiny offsets keep full relative precision
    let (cl, sl, ch, sh) = (lo.cos(), lo.sin(), hi.cos(), hi.sin());
    let from_lo = |s: f64| [cl * s.cos() - sl * s.sin(), sl * s.cos() + cl * s.sin()];
    let from_hi = |s: f64| [ch * s.cos() + sh * s.sin(), sh * s.cos() - ch * s.sin()];
    let layer = |a: f64, b: f64| {
        let mut acc = linalg::KahanSum::default();
        for k in 0..4 {
            let (s0, s1) = (a + (b - a) * k as f64 / 4.0, a + (b - a) * (k + 1) as f64 / 4.0);
            for (s, w) in gauss_on(16, s0, s1) {
                acc.add(w * g(&from_lo(s)));
                acc.add(w * g(&from_hi(s)));
            }
        }
        acc.value()
    };
    let mut core = linalg::KahanSum::default();
    let (a, b) = (lo + eps(1), hi - eps(1));
    for k in 0..64 {
        let (t0, t1) = (a + (b - a) * k as f64 / 64.0, a + (b - a) * (k + 1) as f64 / 64.0);
        for (t, w) in gauss_on(8, t0, t1) {
            core.add(w * g(&[t.cos(), t.sin()]));
        }
    }
    let mut estimates = vec![core.value()];
    let mut running = core;
    for k in 1..levels {
        running.add(layer(eps(k + 1), eps(k)));
        estimates.push(running.value());
    }
    estimates
}

fn classify(estimates: &[f64]) -> Finiteness {
    if estimates.iter().any(|e| !e.is_finite()) {
        return Finiteness::Diverging;
    }
    let k = estimates.len();
    let d: Vec<f64> = estimates.windows(2).map(|w| w[1] - w[0]).collect();
    let last = estimates[k - 1];
    let scale = last.abs().max(1e-300);
    let j = d.len();
    if d[j - 1].abs() <= CAUCHY_TOL * scale && d[j - 2].abs() <= CAUCHY_TOL * scale {
        return Finiteness::Finite;
    }
    let ratios: Vec<f64> = (j - 3..j).map(|i| d[i] / d[i - 1]).collect();
    if ratios.iter().all(|r| (0.0..=0.8).contains(r)) {
        let r = ratios[2];
        let tail = d[j - 1].abs() * r / (1.0 - r);
        if tail <= CAUCHY_TOL * scale {
            return Finiteness::Finite;
        }
    }
    if d[j - 3..].iter().all(|x| *x > 0.0) && ratios.iter().all(|r| *r >= 0.9) {
        return Finiteness::Diverging;
    }
    Finiteness::Inconclusive
}
