//! Residual of the planar Monge–Ampère equation
//!
//! ```text
//! (-h)^{1-p} (h'' + h) = f · (h² + h'²)^{(2-q)/2}
//! ```
//!
//! for a support function `h(φ) < 0` sampled on the arc `Ω_{C°}`, where a
//! direction is `u = (cos φ, sin φ)`.

use crate::cone::Cone;
use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 9;
/// Stencil width of the finite differences.
const STENCIL: usize = 5;
/// Relative tolerance of [`boundary_limit_check`].
const LIMIT_TOL: f64 = 0.05;

/// Samples of a support function on an arc of angles.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportProfile {
    phi: Vec<f64>,
    h: Vec<f64>,
    derivatives: Option<(Vec<f64>, Vec<f64>)>,
    arc: Option<(f64, f64)>,
}

impl SupportProfile {
    pub fn new(phi: Vec<f64>, h: Vec<f64>) -> Result<SupportProfile> {
        if phi.len() != h.len() {
            return Err(Error::DimensionMismatch { expected: phi.len(), found: h.len() });
        }
        if phi.len() < MIN_SAMPLES {
            return Err(Error::TooFewSamples { needed: MIN_SAMPLES, found: phi.len() });
        }
        if phi.windows(2).any(|w| !(w[1] > w[0])) || phi.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("sample angles must be finite and strictly increasing".into()));
        }
        if let Some((i, v)) = h.iter().enumerate().find(|(_, v)| !(**v < 0.0)) {
            return Err(Error::NonNegativityViolation { index: i, value: *v });
        }
        Ok(SupportProfile { phi, h, derivatives: None, arc: None })
    }

    /// Samples `h` at `count` equally spaced angles of `Ω_{C°}`, staying
    /// `margin` away from both ends.
    pub fn sample<F: Fn(f64) -> f64>(cone: &Cone, count: usize, margin: f64, h: F) -> Result<SupportProfile> {
        let (lo, hi) = polar_arc(cone)?;
        let (a, b) = (lo + margin, hi - margin);
        if !(margin > 0.0 && a < b) {
            return Err(Error::EmptyTruncation { t: margin });
        }
        let n = count.max(2);
        let phi: Vec<f64> = (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect();
        let values = phi.iter().map(|&t| h(t)).collect();
        SupportProfile::new(phi, values)?.on_arc(cone)
    }

    /// Attaches the arc `Ω_{C°}` of `cone`; every sample must lie inside it.
    pub fn on_arc(mut self, cone: &Cone) -> Result<SupportProfile> {
        let (lo, hi) = polar_arc(cone)?;
        if self.phi[0] <= lo || *self.phi.last().unwrap() >= hi {
            return Err(Error::OutsideDomain);
        }
        self.arc = Some((lo, hi));
        Ok(self)
    }

    /// Supplies analytic `h'` and `h''` at the sample angles.
    pub fn with_derivatives(mut self, dh: Vec<f64>, d2h: Vec<f64>) -> Result<SupportProfile> {
        for d in [&dh, &d2h] {
            if d.len() != self.phi.len() {
                return Err(Error::DimensionMismatch { expected: self.phi.len(), found: d.len() });
            }
        }
        self.derivatives = Some((dh, d2h));
        Ok(self)
    }

    /// Like [`SupportProfile::with_derivatives`], evaluating callbacks.
    pub fn with_derivative_fns<F: Fn(f64) -> f64, G: Fn(f64) -> f64>(self, dh: F, d2h: G) -> Result<SupportProfile> {
        let d1 = self.phi.iter().map(|&t| dh(t)).collect();
        let d2 = self.phi.iter().map(|&t| d2h(t)).collect();
        self.with_derivatives(d1, d2)
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn values(&self) -> &[f64] {
        &self.h
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn has_derivatives(&self) -> bool {
        self.derivatives.is_some()
    }

    /// `(h', h'')` at every sample: analytic when supplied, otherwise fourth
    /// order finite differences on the nearest five samples.
    pub fn derivatives(&self) -> (Vec<f64>, Vec<f64>) {
        if let Some((d1, d2)) = &self.derivatives {
            return (d1.clone(), d2.clone());
        }
        let n = self.phi.len();
        let mut d1 = Vec::with_capacity(n);
        let mut d2 = Vec::with_capacity(n);
        for k in 0..n {
            let start = k.saturating_sub(STENCIL / 2).min(n - STENCIL);
            let x = &self.phi[start..start + STENCIL];
            let w = fornberg(self.phi[k], x, 2);
            let y = &self.h[start..start + STENCIL];
            d1.push(w[1].iter().zip(y).map(|(a, b)| a * b).sum());
            d2.push(w[2].iter().zip(y).map(|(a, b)| a * b).sum());
        }
        (d1, d2)
    }
}

fn polar_arc(cone: &Cone) -> Result<(f64, f64)> {
    if cone.dim() != 2 {
        return Err(Error::UnsupportedDim { what: "Monge–Ampère residual", dim: cone.dim() });
    }
    Ok(cone.polar().planar_arc().expect("planar cone"))
}

/// Finite-difference weights for derivatives `0..=order` at `x0` on the
/// nodes `x` (Fornberg's recursion).
fn fornberg(x0: f64, x: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = x[0] - x0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - x0;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

#[derive(Clone, Debug)]
pub struct Residual {
    /// Largest absolute residual over the samples that enter the check.
    pub max_abs: f64,
    /// Residual at every sample.
    pub values: Vec<f64>,
    /// Samples skipped in `max_abs`: the two at each end when derivatives come
    /// from one-sided differences.
    pub skipped: usize,
}

/// `(-h)^{1-p}(h'' + h) - f(φ)(h² + h'²)^{(2-q)/2}` at every sample.
pub fn residual<F: Fn(f64) -> f64>(profile: &SupportProfile, density: F, p: f64, q: f64) -> Result<Residual> {
    let (d1, d2) = profile.derivatives();
    let mut values = Vec::with_capacity(profile.len());
    for k in 0..profile.len() {
        let (t, h) = (profile.phi[k], profile.h[k]);
        let f = density(t);
        if !(f >= 0.0 && f.is_finite()) {
            return Err(Error::Invalid(format!("density must be finite and nonnegative, got {f} at φ = {t}")));
        }
        let lhs = (-h).powf(1.0 - p) * (d2[k] + h);
        let rhs = f * (h * h + d1[k] * d1[k]).powf((2.0 - q) / 2.0);
        values.push(lhs - rhs);
    }
    let skipped = if profile.has_derivatives() { 0 } else { STENCIL / 2 };
    let max_abs = values[skipped..values.len() - skipped].iter().map(|r| r.abs()).fold(0.0, f64::max);
    Ok(Residual { max_abs, values, skipped: 2 * skipped })
}

/// The density for which `h` solves the equation exactly:
/// `f = (-h)^{1-p}(h'' + h)(h² + h'²)^{(q-2)/2}`.
pub fn manufactured_density(h: f64, dh: f64, d2h: f64, p: f64, q: f64) -> f64 {
    (-h).powf(1.0 - p) * (d2h + h) * (h * h + dh * dh).powf((q - 2.0) / 2.0)
}

/// Whether `h` tends to zero at both ends of the arc. The end values are
/// extrapolated quadratically from the three outermost samples to the arc
/// endpoints (one sample spacing beyond the data when no arc is attached) and
/// compared against `0.05 · max|h|`.
pub fn boundary_limit_check(profile: &SupportProfile) -> bool {
    let (phi, h) = (&profile.phi, &profile.h);
    let n = phi.len();
    let (lo, hi) = profile
        .arc
        .unwrap_or((2.0 * phi[0] - phi[1], 2.0 * phi[n - 1] - phi[n - 2]));
    let scale = h.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let at = |x0: f64, idx: [usize; 3]| {
        let x: Vec<f64> = idx.iter().map(|&i| phi[i]).collect();
        let w = fornberg(x0, &x, 0);
        idx.iter().zip(&w[0]).map(|(&i, c)| c * h[i]).sum::<f64>()
    };
    let left = at(lo, [0, 1, 2]);
    let right = at(hi, [n - 3, n - 2, n - 1]);
    left.abs() <= LIMIT_TOL * scale && right.abs() <= LIMIT_TOL * scale
}
