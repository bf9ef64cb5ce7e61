//! Pointed closed convex cones, their polars, and the spherical domains
//! `Ω_C = S^{n-1} ∩ int C`.
//!
//! A polyhedral cone is given by generators; the facet normals (equivalently
//! the generators of the polar cone) are derived by enumerating the
//! `(n-1)`-subsets of generators, which is cheap for `n ≤ 4`. Circular cones
//! are described by an axis and a half-angle and have closed-form polars.
//!
//! All angle comparisons use [`ANGLE_TOL`].

use std::f64::consts::PI;
use std::ops::Deref;
use std::sync::OnceLock;

use itertools::Itertools;
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, dot};

pub type Vector = DVector<f64>;

/// Absolute tolerance for angles and for signs of dot products between unit
/// vectors.
pub const ANGLE_TOL: f64 = 1e-12;

/// Tolerance used when deciding whether a derived generator or facet normal
/// satisfies the dual inequalities.
const DUALITY_TOL: f64 = 1e-10;

/// Monte Carlo sample count behind `omega_area` for four-dimensional
/// polyhedral cones.
const AREA_SAMPLES_4D: usize = 1 << 22;

/// A vector of Euclidean length one (to within `1e-12`).
#[derive(Clone, Debug, PartialEq)]
pub struct UnitVector(Vector);

impl UnitVector {
    /// Normalizes `v`. Vectors already of unit length up to rounding are
    /// kept as they are, so normalization is idempotent.
    pub fn new(v: Vector) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || n == 0.0 || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::ZeroVector);
        }
        if (n - 1.0).abs() <= 4.0 * f64::EPSILON {
            return Ok(Self(v));
        }
        Ok(Self(v / n))
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        Self::new(Vector::from_column_slice(v))
    }

    /// Accepts `v` only if it already has unit length.
    pub fn checked(v: Vector) -> Result<Self> {
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self(v))
    }

    /// Planar unit vector `(cos θ, sin θ)`.
    pub fn polar_angle(theta: f64) -> Self {
        Self(Vector::from_column_slice(&[theta.cos(), theta.sin()]))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn into_inner(self) -> Vector {
        self.0
    }

    /// Spherical distance, accurate for nearly parallel and nearly
    /// antipodal pairs.
    pub fn angle(&self, other: &UnitVector) -> f64 {
        let d = (&self.0 - &other.0).norm();
        let s = (&self.0 + &other.0).norm();
        2.0 * d.atan2(s)
    }

    pub fn negated(&self) -> UnitVector {
        UnitVector(-&self.0)
    }
}

impl linalg::Coords for UnitVector {
    fn coords(&self) -> &[f64] {
        self.0.as_slice()
    }
}

impl Deref for UnitVector {
    type Target = Vector;

    fn deref(&self) -> &Vector {
        &self.0
    }
}

impl Serialize for UnitVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_slice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnitVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        UnitVector::from_slice(&v).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeKind {
    Polyhedral,
    Circular,
}

/// A pointed closed convex cone with nonempty interior.
///
/// For polyhedral cones (and planar circular cones, which are polyhedral in
/// disguise) both the extreme rays and the outward unit facet normals are
/// stored. The facet normals are exactly the generators of the polar cone.
/// In dimension three the rays are stored in cyclic order around the cone.
#[derive(Debug)]
pub struct Cone {
    dim: usize,
    kind: ConeKind,
    generators: Vec<UnitVector>,
    facet_normals: Vec<UnitVector>,
    circular: Option<(UnitVector, f64)>,
    xi: UnitVector,
    area: OnceLock<f64>,
}

impl Clone for Cone {
    fn clone(&self) -> Self {
        Cone {
            dim: self.dim,
            kind: self.kind,
            generators: self.generators.clone(),
            facet_normals: self.facet_normals.clone(),
            circular: self.circular.clone(),
            xi: self.xi.clone(),
            area: self.area.clone(),
        }
    }
}

impl Cone {
    /// The nonnegative orthant of R^n.
    pub fn orthant(dim: usize) -> Result<Cone> {
        let gens = (0..dim)
            .map(|i| {
                let mut v = vec![0.0; dim];
                v[i] = 1.0;
                v
            })
            .collect::<Vec<_>>();
        Cone::polyhedral(dim, &gens)
    }

    /// The planar cone between the rays at angles `lo < hi` (with
    /// `hi - lo < π`).
    pub fn planar(lo: f64, hi: f64) -> Result<Cone> {
        Cone::polyhedral(2, &[vec![lo.cos(), lo.sin()], vec![hi.cos(), hi.sin()]])
    }

    /// Builds the cone generated by `generators` (which need not be unit
    /// vectors nor irredundant).
    pub fn polyhedral(dim: usize, generators: &[Vec<f64>]) -> Result<Cone> {
        if dim < 2 {
            return Err(Error::UnsupportedDim { what: "cone", dim });
        }
        if dim > 4 {
            return Err(Error::UnsupportedDim { what: "polyhedral polar computation", dim });
        }
        let gens = generators
            .iter()
            .map(|g| {
                if g.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: g.len() });
                }
                UnitVector::from_slice(g)
            })
            .collect::<Result<Vec<_>>>()?;
        if gens.is_empty() {
            return Err(Error::DegenerateCone { dim });
        }

        let slices: Vec<&[f64]> = gens.iter().map(|g| g.as_slice()).collect();
        let xi = separating_direction(&slices, dim)?;
        if gens.len() < dim || linalg::rank(&slices, dim, 1e-10) < dim {
            return Err(Error::DegenerateCone { dim });
        }

        let facet_normals = rays_of_halfspace_cone(&gens, dim);
        // keep the caller's generators bit for bit where they are extreme rays
        let rays = rays_of_halfspace_cone(&facet_normals, dim)
            .into_iter()
            .map(|r| gens.iter().find(|g| g.angle(&r) < 1e-12).cloned().unwrap_or(r))
            .collect();
        Cone::from_parts(dim, rays, facet_normals, Some(xi))
    }

    /// Circular cone `{x : angle(x, axis) ≤ half_angle}`.
    pub fn circular(axis: &[f64], half_angle: f64) -> Result<Cone> {
        let dim = axis.len();
        if !(2..=4).contains(&dim) {
            return Err(Error::UnsupportedDim { what: "circular cone", dim });
        }
        if !(half_angle > 0.0 && half_angle < PI / 2.0) {
            return Err(Error::Invalid(format!(
                "circular half-angle must lie in (0, π/2), got {half_angle}"
            )));
        }
        let axis = UnitVector::from_slice(axis)?;
        let (generators, facet_normals) = if dim == 2 {
            let t = axis[1].atan2(axis[0]);
            let lo = UnitVector::polar_angle(t - half_angle);
            let hi = UnitVector::polar_angle(t + half_angle);
            let n_lo = UnitVector::polar_angle(t - half_angle - PI / 2.0);
            let n_hi = UnitVector::polar_angle(t + half_angle + PI / 2.0);
            (vec![lo, hi], vec![n_lo, n_hi])
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(Cone {
            dim,
            kind: ConeKind::Circular,
            generators,
            facet_normals,
            xi: axis.clone(),
            circular: Some((axis, half_angle)),
            area: OnceLock::new(),
        })
    }

    fn from_parts(
        dim: usize,
        mut generators: Vec<UnitVector>,
        mut facet_normals: Vec<UnitVector>,
        xi: Option<UnitVector>,
    ) -> Result<Cone> {
        let slices: Vec<&[f64]> = generators.iter().map(|g| g.as_slice()).collect();
        let xi = match xi {
            Some(xi) => xi,
            None => separating_direction(&slices, dim)?,
        };
        if dim == 3 {
            sort_cyclic(&mut generators, &xi);
            // the polar's reference direction is not needed for the ordering
            // of the normals: any interior direction of C° works, and -ξ is one
            let neg = xi.negated();
            sort_cyclic(&mut facet_normals, &neg);
        }
        if dim == 2 {
            sort_by_angle_around(&mut generators, &xi);
        }
        for g in &generators {
            for w in &facet_normals {
                if dot(g, w) > DUALITY_TOL {
                    return Err(Error::Invalid("inconsistent generator/halfspace description".into()));
                }
            }
        }
        Ok(Cone {
            dim,
            kind: ConeKind::Polyhedral,
            generators,
            facet_normals,
            circular: None,
            xi,
            area: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> ConeKind {
        self.kind
    }

    /// Extreme rays. Empty for circular cones in dimension three and up.
    pub fn generators(&self) -> &[UnitVector] {
        &self.generators
    }

    /// Outward unit facet normals; these generate the polar cone. Empty for
    /// circular cones in dimension three and up.
    pub fn polar_generators(&self) -> &[UnitVector] {
        &self.facet_normals
    }

    /// `(axis, half_angle)` for circular cones.
    pub fn circular_params(&self) -> Option<(&UnitVector, f64)> {
        self.circular.as_ref().map(|(a, t)| (a, *t))
    }

    /// True when the cone has a finite generator/halfspace description
    /// (polyhedral cones and planar circular cones).
    pub fn has_facets(&self) -> bool {
        !self.facet_normals.is_empty()
    }

    /// The polar cone `C° = {y : x·y ≤ 0 for all x ∈ C}`.
    pub fn polar(&self) -> Cone {
        match (&self.circular, self.kind) {
            (Some((axis, alpha)), _) => {
                Cone::circular(axis.negated().as_slice(), PI / 2.0 - alpha).expect("polar of a valid circular cone")
            }
            _ => Cone::from_parts(
                self.dim,
                self.facet_normals.clone(),
                self.generators.clone(),
                None,
            )
            .expect("polar of a valid polyhedral cone"),
        }
    }

    /// Whether `v` lies in `Ω_C`, the open spherical domain of the cone.
    pub fn omega_contains(&self, v: &[f64]) -> bool {
        if v.len() != self.dim {
            return false;
        }
        match &self.circular {
            Some((axis, alpha)) if self.dim > 2 => {
                let c = dot(axis, v).clamp(-1.0, 1.0);
                c.acos() < alpha - ANGLE_TOL
            }
            _ => self.facet_normals.iter().all(|w| dot(w, v) < -ANGLE_TOL),
        }
    }

    /// Spherical distance from `u ∈ Ω_C` to the boundary of `Ω_C`.
    pub fn boundary_angle(&self, u: &[f64]) -> Result<f64> {
        if !self.omega_contains(u) {
            return Err(Error::OutsideDomain);
        }
        Ok(self.boundary_angle_unchecked(u))
    }

    pub(crate) fn boundary_angle_unchecked(&self, u: &[f64]) -> f64 {
        match &self.circular {
            Some((axis, alpha)) if self.dim > 2 => {
                let au = UnitVector(Vector::from_column_slice(u));
                alpha - axis.angle(&au)
            }
            _ => self
                .facet_normals
                .iter()
                .map(|w| (-dot(w, u)).clamp(-1.0, 1.0).asin())
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Whether `u` lies in `Ω_{C°}`, without building the polar cone.
    pub fn polar_contains(&self, u: &[f64]) -> bool {
        if u.len() != self.dim {
            return false;
        }
        match &self.circular {
            Some((axis, alpha)) if self.dim > 2 => {
                let c = (-dot(axis, u)).clamp(-1.0, 1.0);
                c.acos() < PI / 2.0 - alpha - ANGLE_TOL
            }
            _ => self.generators.iter().all(|g| dot(g, u) < -ANGLE_TOL),
        }
    }

    /// Spherical distance from `u ∈ Ω_{C°}` to the boundary of `Ω_{C°}`.
    pub fn polar_boundary_angle(&self, u: &[f64]) -> Result<f64> {
        if !self.polar_contains(u) {
            return Err(Error::OutsideDomain);
        }
        Ok(match &self.circular {
            Some((axis, alpha)) if self.dim > 2 => {
                let au = UnitVector(Vector::from_column_slice(u));
                PI / 2.0 - alpha - axis.negated().angle(&au)
            }
            _ => self
                .generators
                .iter()
                .map(|g| (-dot(g, u)).clamp(-1.0, 1.0).asin())
                .fold(f64::INFINITY, f64::min),
        })
    }

    /// A fixed direction `ξ ∈ Ω_C` with `x·ξ > 0` for every nonzero `x ∈ C`.
    pub fn reference_direction(&self) -> &UnitVector {
        &self.xi
    }

    /// Spherical Lebesgue measure of `Ω_C`.
    pub fn omega_area(&self) -> f64 {
        *self.area.get_or_init(|| self.compute_area())
    }

    fn compute_area(&self) -> f64 {
        if self.dim == 2 {
            return self.generators[0].angle(&self.generators[1]);
        }
        if let Some((_, alpha)) = &self.circular {
            // |S^{n-2}| ∫_0^α sin^{n-2} ψ dψ
            return match self.dim {
                3 => 2.0 * PI * (1.0 - alpha.cos()),
                4 => PI * (2.0 * alpha - (2.0 * alpha).sin()),
                _ => unreachable!("circular cones are built for n ≤ 4 only"),
            };
        }
        if self.dim == 3 {
            let k = self.generators.len();
            let xi = self.xi.as_slice();
            return linalg::kahan_total((0..k).map(|i| {
                let a = self.generators[i].as_slice();
                let b = self.generators[(i + 1) % k].as_slice();
                spherical_triangle_area(xi, a, b)
            }));
        }
        // n = 4: seeded Monte Carlo estimate
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a4ea);
        let mut hits = 0usize;
        let mut v = [0.0; 4];
        for _ in 0..AREA_SAMPLES_4D {
            for x in v.iter_mut() {
                *x = StandardNormal.sample(&mut rng);
            }
            if self.facet_normals.iter().all(|w| dot(w, &v) < 0.0) {
                hits += 1;
            }
        }
        2.0 * PI * PI * hits as f64 / AREA_SAMPLES_4D as f64
    }

    /// Angular interval `(lo, hi)` of `Ω_C` for planar cones.
    pub fn planar_arc(&self) -> Option<(f64, f64)> {
        if self.dim != 2 {
            return None;
        }
        let t = self.xi[1].atan2(self.xi[0]);
        let a = &self.generators[0];
        let b = &self.generators[1];
        let signed = |g: &UnitVector| {
            let cross = self.xi[0] * g[1] - self.xi[1] * g[0];
            cross.atan2(dot(&self.xi, g))
        };
        let (sa, sb) = (signed(a), signed(b));
        Some((t + sa.min(sb), t + sa.max(sb)))
    }

    /// Equality of cones up to generator order and a vector tolerance.
    pub fn approx_eq(&self, other: &Cone, tol: f64) -> bool {
        if self.dim != other.dim || self.kind != other.kind {
            return false;
        }
        if let (Some((a1, t1)), Some((a2, t2))) = (&self.circular, &other.circular) {
            return (&a1.0 - &a2.0).norm() <= tol && (t1 - t2).abs() <= tol;
        }
        same_vector_set(&self.generators, &other.generators, tol)
            && same_vector_set(&self.facet_normals, &other.facet_normals, tol)
    }
}

fn same_vector_set(a: &[UnitVector], b: &[UnitVector], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|x| b.iter().any(|y| (&x.0 - &y.0).norm() <= tol))
        && b.iter().all(|y| a.iter().any(|x| (&x.0 - &y.0).norm() <= tol))
}

/// Area of the spherical triangle with unit vertices `a, b, c`.
pub(crate) fn spherical_triangle_area(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let num = linalg::det3(a, b, c).abs();
    let den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    2.0 * num.atan2(den)
}

/// Normalized generator mean when it separates, otherwise the normalized
/// minimum-norm point of the generators' convex hull (the direction that
/// maximizes the smallest generator angle cosine).
fn separating_direction(gens: &[&[f64]], dim: usize) -> Result<UnitVector> {
    let mut mean = Vector::zeros(dim);
    for g in gens {
        mean += Vector::from_column_slice(g);
    }
    if let Ok(xi) = UnitVector::new(mean) {
        if gens.iter().all(|g| dot(g, &xi) > ANGLE_TOL) {
            return Ok(xi);
        }
    }
    let nearest = linalg::min_norm_in_hull(gens, dim);
    if nearest.norm() < 1e-10 {
        return Err(Error::NotPointed);
    }
    let xi = UnitVector::new(nearest).map_err(|_| Error::NotPointed)?;
    if gens.iter().all(|g| dot(g, &xi) > ANGLE_TOL) {
        Ok(xi)
    } else {
        Err(Error::NotPointed)
    }
}

/// Extreme rays of `{x : a·x ≤ 0 for all a ∈ normals}`.
fn rays_of_halfspace_cone(normals: &[UnitVector], dim: usize) -> Vec<UnitVector> {
    let mut rays: Vec<UnitVector> = Vec::new();
    for subset in (0..normals.len()).combinations(dim - 1) {
        let rows: Vec<&[f64]> = subset.iter().map(|&i| normals[i].as_slice()).collect();
        let w = linalg::generalized_cross(&rows, dim);
        if w.norm() < 1e-10 {
            continue;
        }
        let w = UnitVector::new(w).expect("nonzero");
        for cand in [w.clone(), w.negated()] {
            if normals.iter().all(|a| dot(a, &cand) <= DUALITY_TOL)
                && !rays.iter().any(|r| r.angle(&cand) < 1e-9)
            {
                rays.push(cand);
            }
        }
    }
    rays
}

fn sort_cyclic(vs: &mut [UnitVector], around: &UnitVector) {
    let (e1, e2) = tangent_basis(around.as_slice());
    vs.sort_by(|a, b| {
        let ta = dot(a, &e2).atan2(dot(a, &e1));
        let tb = dot(b, &e2).atan2(dot(b, &e1));
        ta.total_cmp(&tb)
    });
}

fn sort_by_angle_around(vs: &mut [UnitVector], around: &UnitVector) {
    vs.sort_by(|a, b| {
        let sa = (around[0] * a[1] - around[1] * a[0]).atan2(dot(around, a));
        let sb = (around[0] * b[1] - around[1] * b[0]).atan2(dot(around, b));
        sa.total_cmp(&sb)
    });
}

/// Orthonormal basis of the plane orthogonal to a unit vector in R^3.
pub(crate) fn tangent_basis(n: &[f64]) -> ([f64; 3], [f64; 3]) {
    let pick = if n[0].abs() < 0.6 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let c = linalg::cross3(n, &pick);
    let cn = linalg::norm(&c);
    let e1 = [c[0] / cn, c[1] / cn, c[2] / cn];
    let e2 = linalg::cross3(n, &e1);
    (e1, e2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn unit(v: &[f64]) -> Vec<f64> {
        UnitVector::from_slice(v).unwrap().as_slice().to_vec()
    }

    #[test]
    fn planar_orthant_polar_is_negative_orthant() {
        let c = Cone::orthant(2).unwrap();
        let polar = c.polar();
        let mut gens: Vec<Vec<f64>> = polar.generators().iter().map(|g| g.as_slice().to_vec()).collect();
        gens.sort_by(|a, b| a[0].total_cmp(&b[0]));
        assert_eq!(gens, vec![vec![-1.0, 0.0], vec![0.0, -1.0]]);
        assert!(polar.polar().approx_eq(&c, 1e-10));
    }

    #[test]
    fn line_is_not_pointed() {
        let err = Cone::polyhedral(2, &[vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::NotPointed));
        let err = Cone::polyhedral(2, &[vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::NotPointed));
    }

    #[test]
    fn flat_cone_is_degenerate() {
        let err = Cone::polyhedral(3, &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::DegenerateCone { dim: 3 }));
    }

    #[test]
    fn five_dimensional_polyhedral_is_unsupported() {
        let gens: Vec<Vec<f64>> = (0..5).map(|i| (0..5).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        assert!(matches!(Cone::polyhedral(5, &gens), Err(Error::UnsupportedDim { dim: 5, .. })));
    }

    #[test]
    fn circular_polar_has_complementary_angle() {
        let c = Cone::circular(&[0.0, 0.0, 1.0], PI / 6.0).unwrap();
        let p = c.polar();
        let (axis, alpha) = p.circular_params().unwrap();
        assert_eq!(axis.as_slice(), &[0.0, 0.0, -1.0]);
        assert!((alpha - PI / 3.0).abs() < 1e-15);
        assert!(p.polar().approx_eq(&c, 1e-12));
    }

    #[test]
    fn omega_membership_is_strict() {
        let c = Cone::orthant(2).unwrap();
        assert!(c.omega_contains(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]));
        assert!(!c.omega_contains(&[1.0, 0.0]));
        assert!(!c.omega_contains(&[-FRAC_1_SQRT_2, -FRAC_1_SQRT_2]));
    }

    #[test]
    fn boundary_angle_in_negative_orthant() {
        let polar = Cone::orthant(2).unwrap().polar();
        let d = polar.boundary_angle(&[-FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).unwrap();
        assert!((d - PI / 4.0).abs() < 1e-14);
        let d = polar.boundary_angle(&[-0.6, -0.8]).unwrap();
        assert!((d - (0.6f64 / 0.8).atan()).abs() < 1e-14);
        assert!(matches!(polar.boundary_angle(&[1.0, 0.0]), Err(Error::OutsideDomain)));
    }

    #[test]
    fn boundary_angle_matches_dense_boundary_sampling() {
        // oracle: nearest point among densely sampled boundary rays
        let polar = Cone::orthant(2).unwrap().polar();
        for u in [[-FRAC_1_SQRT_2, -FRAC_1_SQRT_2], [-0.6, -0.8]] {
            let u = UnitVector::from_slice(&u).unwrap();
            let mut best = f64::INFINITY;
            for ray in [[-1.0, 0.0], [0.0, -1.0]] {
                best = best.min(u.angle(&UnitVector::from_slice(&ray).unwrap()));
            }
            assert!((polar.boundary_angle(u.as_slice()).unwrap() - best).abs() < 1e-12);
        }
    }

    #[test]
    fn reference_direction_examples() {
        let c = Cone::orthant(2).unwrap();
        let xi = c.reference_direction();
        assert!((xi[0] - FRAC_1_SQRT_2).abs() < 1e-15 && (xi[1] - FRAC_1_SQRT_2).abs() < 1e-15);
        let circ = Cone::circular(&[0.0, 1.0, 1.0], 1.2).unwrap();
        assert_eq!(circ.reference_direction().as_slice(), unit(&[0.0, 1.0, 1.0]).as_slice());
        // a wide planar cone: generators 80° apart on either side of the mean
        let a = 80f64.to_radians();
        let wide = Cone::polyhedral(2, &[vec![1.0, 0.0], vec![a.cos(), a.sin()], vec![(a / 2.0).cos(), (a / 2.0).sin()]]).unwrap();
        let xi = wide.reference_direction();
        assert!(wide.generators().iter().all(|g| dot(g, xi) > 0.0));
    }

    #[test]
    fn chebyshev_fallback_when_mean_fails() {
        // many generators crowd one side; the mean still separates here but the
        // hull routine must agree on pointedness
        let gens: Vec<&[f64]> = vec![&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]];
        let xi = separating_direction(&gens, 3).unwrap();
        assert!(gens.iter().all(|g| dot(g, &xi) > 0.0));
    }

    #[test]
    fn areas() {
        assert!((Cone::orthant(2).unwrap().omega_area() - PI / 2.0).abs() < 1e-15);
        let a = PI / 6.0;
        let c = Cone::circular(&[0.0, 0.0, 1.0], a).unwrap();
        assert!((c.omega_area() - 2.0 * PI * (1.0 - a.cos())).abs() < 1e-15);
        let theta = 1.1;
        assert!((Cone::planar(0.3, 0.3 + theta).unwrap().omega_area() - theta).abs() < 1e-14);
        // octant of S^2 has area π/2
        assert!((Cone::orthant(3).unwrap().omega_area() - PI / 2.0).abs() < 1e-14);
        // orthant of S^3: |S^3| / 16
        let a4 = Cone::orthant(4).unwrap().omega_area();
        assert!((a4 - 2.0 * PI * PI / 16.0).abs() < 5e-3 * a4);
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let c = Cone::polyhedral(3, &[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0],
        ])
        .unwrap();
        assert_eq!(c.generators().len(), 3);
        assert_eq!(c.polar_generators().len(), 3);
    }

    #[test]
    fn square_cone_in_three_dimensions() {
        let c = Cone::polyhedral(3, &[
            vec![1.0, 1.0, 2.0],
            vec![-1.0, 1.0, 2.0],
            vec![-1.0, -1.0, 2.0],
            vec![1.0, -1.0, 2.0],
        ])
        .unwrap();
        assert_eq!(c.polar_generators().len(), 4);
        for g in c.generators() {
            for w in c.polar_generators() {
                assert!(dot(g, w) <= 1e-12);
            }
        }
        assert!(c.polar().polar().approx_eq(&c, 1e-10));
    }

    #[test]
    fn planar_arc_bounds() {
        let c = Cone::planar(0.2, 1.0).unwrap();
        let (lo, hi) = c.planar_arc().unwrap();
        assert!((lo - 0.2).abs() < 1e-14 && (hi - 1.0).abs() < 1e-14);
    }
}
