//! C-polytopes: sets `A = C ∩ ⋂_i {x : u_i·x ≤ h_i}` with outer normals
//! `u_i ∈ Ω_{C°}` and negative support numbers `h_i`.
//!
//! The complement `C \ A` is bounded, and `A` is the Wulff shape of the
//! function `f_i = -h_i` on the normal set. Support values stored in a
//! polytope are the constraint levels; for a facet that does not touch `A`
//! the realized support [`CPolytope::support`] is strictly smaller.

use std::sync::OnceLock;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::cone::{Cone, UnitVector, Vector};
use crate::convex::ConicProgram;
use crate::error::{Error, Result};
use crate::linalg::{self, dot, norm};

/// Two normals closer than this (in angle) are treated as the same direction.
pub const DUPLICATE_ANGLE: f64 = 1e-9;

/// Relative gap under which the two largest radial candidates count as a tie.
const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    pub u: UnitVector,
    pub h: f64,
}

/// Radial function value together with the radial Gauss map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialHit {
    pub rho: f64,
    /// Facet hit by the ray; the lowest index wins ties.
    pub facet: usize,
    /// Another facet is hit at (numerically) the same distance.
    pub tie: bool,
}

/// Geometry of one facet `F_i = A ∩ H(u_i, h_i)`.
#[derive(Clone, Debug)]
pub struct FacetGeometry {
    pub index: usize,
    /// Vertices of `F_i`; in dimension three they are in cyclic order.
    /// Empty for facets that do not touch the set.
    pub vertices: Vec<Vector>,
    /// `(n-1)`-dimensional measure of `F_i`.
    pub measure: f64,
    /// Corners of the spherical region `Ω_C ∩ Δ_i` (radial projections of
    /// the vertices).
    pub region: Vec<UnitVector>,
}

impl FacetGeometry {
    pub fn is_active(&self) -> bool {
        self.measure > 0.0
    }
}

#[derive(Debug)]
pub struct CPolytope {
    cone: Cone,
    facets: Vec<Facet>,
    vertices: OnceLock<Vec<Vector>>,
    geometry: OnceLock<Vec<FacetGeometry>>,
}

impl Clone for CPolytope {
    fn clone(&self) -> Self {
        CPolytope {
            cone: self.cone.clone(),
            facets: self.facets.clone(),
            vertices: self.vertices.clone(),
            geometry: self.geometry.clone(),
        }
    }
}

/// The Wulff shape `C ∩ ⋂ {x : x·u_i ≤ -f_i}`.
pub fn wulff_shape(cone: &Cone, atoms: &[(UnitVector, f64)]) -> Result<CPolytope> {
    for (i, (_, f)) in atoms.iter().enumerate() {
        if !(*f > 0.0 && f.is_finite()) {
            return Err(Error::NonPositive { index: i, value: *f });
        }
    }
    let facets = atoms.iter().map(|(u, f)| Facet { u: u.clone(), h: -f }).collect();
    CPolytope::new(cone.clone(), facets)
}

impl CPolytope {
    pub fn new(cone: Cone, facets: Vec<Facet>) -> Result<CPolytope> {
        if facets.is_empty() {
            return Err(Error::NoFacets);
        }
        for (i, f) in facets.iter().enumerate() {
            if f.u.dim() != cone.dim() {
                return Err(Error::DimensionMismatch { expected: cone.dim(), found: f.u.dim() });
            }
            if !cone.polar_contains(f.u.as_slice()) {
                return Err(Error::InvalidDirection { index: i });
            }
            if !(f.h < 0.0 && f.h.is_finite()) {
                return Err(Error::NonPositive { index: i, value: -f.h });
            }
        }
        for (i, j) in (0..facets.len()).tuple_combinations() {
            if facets[i].u.angle(&facets[j].u) <= DUPLICATE_ANGLE {
                return Err(Error::DuplicateDirection { first: i, second: j });
            }
        }
        Ok(CPolytope { cone, facets, vertices: OnceLock::new(), geometry: OnceLock::new() })
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// `λ·A`, which scales every support number by `λ`.
    pub fn dilate(&self, lambda: f64) -> Result<CPolytope> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::NonPositive { index: 0, value: lambda });
        }
        let facets = self.facets.iter().map(|f| Facet { u: f.u.clone(), h: lambda * f.h }).collect();
        CPolytope::new(self.cone.clone(), facets)
    }

    /// Same normals, new support numbers.
    pub fn with_support_values(&self, h: &[f64]) -> Result<CPolytope> {
        if h.len() != self.facets.len() {
            return Err(Error::DimensionMismatch { expected: self.facets.len(), found: h.len() });
        }
        let facets = self.facets.iter().zip(h).map(|(f, &h)| Facet { u: f.u.clone(), h }).collect();
        CPolytope::new(self.cone.clone(), facets)
    }

    /// Radial function and radial Gauss map at `v ∈ Ω_C`.
    pub fn radial(&self, v: &[f64]) -> Result<RadialHit> {
        if !self.cone.omega_contains(v) {
            return Err(Error::OutsideOmega);
        }
        Ok(self.radial_unchecked(v))
    }

    /// `max_i h_i / (u_i·v)` for any `v` in `C \ {0}`, unit or not; the
    /// returned value is the radial function times `|v|⁻¹`.
    pub(crate) fn radial_unchecked(&self, v: &[f64]) -> RadialHit {
        let mut best = f64::NEG_INFINITY;
        let mut second = f64::NEG_INFINITY;
        let mut facet = 0;
        for (i, f) in self.facets.iter().enumerate() {
            let r = f.h / dot(&f.u, v);
            if r > best {
                second = best;
                best = r;
                facet = i;
            } else if r > second {
                second = r;
            }
        }
        RadialHit { rho: best, facet, tie: second >= best * (1.0 - TIE_TOL) }
    }

    /// The boundary point `ρ(v)·v` in direction `v ∈ Ω_C`.
    pub fn boundary_point(&self, v: &[f64]) -> Result<Vector> {
        let hit = self.radial(v)?;
        Ok(Vector::from_column_slice(v) * hit.rho)
    }

    /// Support function `sup {x·u : x ∈ A}` for `u ∈ Ω_{C°}`.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        if !self.cone.polar_contains(u) {
            return Err(Error::OutsideOmega);
        }
        self.support_unchecked(u)
    }

    pub(crate) fn support_unchecked(&self, u: &[f64]) -> Result<f64> {
        if self.cone.has_facets() {
            // the recession cone of A is C, so the sup is finite iff u·g < 0
            // for every extreme ray g
            if self.cone.generators().iter().any(|g| dot(g, u) >= 0.0) {
                return Err(Error::Unbounded);
            }
            return Ok(self.vertices().iter().map(|x| dot(x, u)).fold(f64::NEG_INFINITY, f64::max));
        }
        let (axis, alpha) = self.cone.circular_params().expect("circular cone");
        let rows: Vec<(&[f64], f64)> = self.facets.iter().map(|f| (f.u.as_slice(), f.h)).collect();
        let c: Vec<f64> = u.iter().map(|x| -x).collect();
        let prog = ConicProgram { rows: &rows, axis: axis.as_slice(), half_angle: alpha, c: &c, gamma: 0.0 };
        let x = prog.solve().ok_or(Error::Unbounded)?;
        Ok(dot(&x, u))
    }

    /// Realized support values `h_C(A, u_i)`; equal to `h_i` exactly for
    /// facets that touch `A`.
    pub fn realized_support(&self) -> Result<Vec<f64>> {
        self.facets.iter().map(|f| self.support_unchecked(f.u.as_slice())).collect()
    }

    /// Radial function of the copolar set at `u ∈ Ω_{C°}`.
    pub fn copolar_radial(&self, u: &[f64]) -> Result<f64> {
        Ok(-1.0 / self.support(u)?)
    }

    /// Generator points `u_i / (-h_i)` of the copolar set: the copolar set is
    /// their convex hull plus `C°`.
    pub fn copolar_points(&self) -> Vec<Vector> {
        self.facets.iter().map(|f| &*f.u / (-f.h)).collect()
    }

    fn halfspaces(&self) -> Vec<(Vec<f64>, f64)> {
        let mut rows: Vec<(Vec<f64>, f64)> =
            self.cone.polar_generators().iter().map(|w| (w.as_slice().to_vec(), 0.0)).collect();
        rows.extend(self.facets.iter().map(|f| (f.u.as_slice().to_vec(), f.h)));
        rows
    }

    /// Vertices of `A` (polyhedral cones only).
    pub(crate) fn vertices(&self) -> &[Vector] {
        self.vertices.get_or_init(|| enumerate_vertices(&self.halfspaces(), self.dim()))
    }

    /// Distance from the origin to `A`.
    pub fn b_distance(&self) -> f64 {
        if self.cone.has_facets() {
            let rows = self.halfspaces();
            let normals: Vec<Vec<f64>> = rows.iter().map(|r| r.0.clone()).collect();
            let rhs: Vec<f64> = rows.iter().map(|r| r.1).collect();
            return linalg::min_norm_point(&normals, &rhs, self.dim())
                .expect("a C-polytope is nonempty")
                .norm();
        }
        let (axis, alpha) = self.cone.circular_params().expect("circular cone");
        let rows: Vec<(&[f64], f64)> = self.facets.iter().map(|f| (f.u.as_slice(), f.h)).collect();
        let zero = vec![0.0; self.dim()];
        let prog = ConicProgram { rows: &rows, axis: axis.as_slice(), half_angle: alpha, c: &zero, gamma: 1.0 };
        norm(&prog.solve().expect("a C-polytope is nonempty"))
    }

    /// Facet polygons (n = 3) or segments (n = 2). Inactive facets get empty
    /// geometry and measure zero.
    pub fn facet_geometry(&self) -> Result<&[FacetGeometry]> {
        let n = self.dim();
        if n > 3 {
            return Err(Error::UnsupportedDim { what: "facet geometry", dim: n });
        }
        if !self.cone.has_facets() {
            return Err(Error::UnsupportedCone { what: "facet geometry" });
        }
        Ok(self.geometry.get_or_init(|| (0..self.facets.len()).map(|i| self.compute_facet(i)).collect()))
    }

    fn compute_facet(&self, i: usize) -> FacetGeometry {
        let f = &self.facets[i];
        // H(u_i, h_i) ∩ C: each extreme ray meets the plane once, since u_i·g < 0
        let mut poly: Vec<Vector> = self
            .cone
            .generators()
            .iter()
            .map(|g| &**g * (f.h / dot(&f.u, g)))
            .collect();
        let scale = poly.iter().map(|x| x.norm()).fold(0.0, f64::max);
        for (j, other) in self.facets.iter().enumerate() {
            if j == i || poly.is_empty() {
                continue;
            }
            poly = if self.dim() == 2 {
                clip_segment(&poly, &other.u, other.h)
            } else {
                clip_polygon(&poly, &other.u, other.h)
            };
        }
        let measure = match self.dim() {
            2 if poly.len() == 2 => (&poly[1] - &poly[0]).norm(),
            3 if poly.len() >= 3 => polygon_area(&poly),
            _ => 0.0,
        };
        let floor = match self.dim() {
            2 => 1e-13 * scale,
            _ => 1e-13 * scale * scale,
        };
        if measure <= floor {
            return FacetGeometry { index: i, vertices: Vec::new(), measure: 0.0, region: Vec::new() };
        }
        let region = poly.iter().map(|x| UnitVector::new(x.clone()).expect("nonzero vertex")).collect();
        FacetGeometry { index: i, vertices: poly, measure, region }
    }

    /// Volume of the bounded region `C \ A` (n ≤ 3, polyhedral cones), as the
    /// sum of the cones over the facets.
    pub fn coconvex_volume(&self) -> Result<f64> {
        let n = self.dim() as f64;
        let geo = self.facet_geometry()?;
        Ok(linalg::kahan_total(geo.iter().map(|g| -self.facets[g.index].h * g.measure / n)))
    }

    /// Facet pieces inside the truncation `C_t = {x ∈ C : ξ·x ≤ t}`, as
    /// `(facet index, vertices)`: segments for n = 2, polygons for n = 3.
    pub fn truncated_facets(&self, t: f64) -> Result<Vec<(usize, Vec<Vector>)>> {
        let xi = self.cone.reference_direction();
        let mut out = Vec::new();
        for g in self.facet_geometry()?.iter().filter(|g| g.is_active()) {
            let piece = if self.dim() == 2 {
                clip_segment(&g.vertices, xi, t)
            } else {
                clip_polygon(&g.vertices, xi, t)
            };
            if piece.len() >= self.dim() {
                out.push((g.index, piece));
            }
        }
        if out.is_empty() {
            return Err(Error::EmptyTruncation { t });
        }
        Ok(out)
    }
}

/// Whether two polytopes live in the same cone with the same normals (in the
/// same order).
pub fn same_normals(a: &CPolytope, b: &CPolytope) -> bool {
    a.cone.approx_eq(&b.cone, 1e-12)
        && a.facets.len() == b.facets.len()
        && a.facets.iter().zip(&b.facets).all(|(x, y)| x.u.angle(&y.u) <= 1e-12)
}

/// The p-co-sum `A1 ⊕_p A2` for `p ∈ (0, 1]`, or for `p = 0` the log-co-sum
/// `(1-τ)A1 ⊕_0 τA2` (τ defaults to 1/2). Support values are the realized
/// ones, so inactive facets do not distort the result.
pub fn p_co_sum(a1: &CPolytope, a2: &CPolytope, p: f64, tau: Option<f64>) -> Result<CPolytope> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidP { p });
    }
    if !same_normals(a1, a2) {
        return Err(Error::MismatchedNormals);
    }
    let tau = tau.unwrap_or(0.5);
    if p == 0.0 && !(0.0..=1.0).contains(&tau) {
        return Err(Error::Invalid(format!("log-co-sum weight must lie in [0, 1], got {tau}")));
    }
    let s1 = a1.realized_support()?;
    let s2 = a2.realized_support()?;
    let atoms: Vec<(UnitVector, f64)> = a1
        .facets
        .iter()
        .zip(s1.iter().zip(&s2))
        .map(|(f, (h1, h2))| {
            let (b1, b2) = (-h1, -h2);
            let combined = if p == 0.0 {
                b1.powf(1.0 - tau) * b2.powf(tau)
            } else {
                (b1.powf(p) + b2.powf(p)).powf(1.0 / p)
            };
            (f.u.clone(), combined)
        })
        .collect();
    wulff_shape(&a1.cone, &atoms)
}

/// Hausdorff distance between `A ∩ C_t` and `B ∩ C_t`, where
/// `C_t = C ∩ {x : ξ·x ≤ t}` and `ξ` is the cone's reference direction.
pub fn hausdorff_truncated(a: &CPolytope, b: &CPolytope, t: f64) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    if !a.cone.has_facets() || !b.cone.has_facets() {
        return Err(Error::UnsupportedCone { what: "truncated Hausdorff distance" });
    }
    let n = a.dim();
    let truncate = |p: &CPolytope| {
        let mut rows = p.halfspaces();
        rows.push((a.cone.reference_direction().as_slice().to_vec(), t));
        rows
    };
    let (ra, rb) = (truncate(a), truncate(b));
    let (va, vb) = (enumerate_vertices(&ra, n), enumerate_vertices(&rb, n));
    if va.is_empty() || vb.is_empty() {
        return Err(Error::EmptyTruncation { t });
    }
    let distance_to = |rows: &[(Vec<f64>, f64)], x: &Vector| {
        let normals: Vec<Vec<f64>> = rows.iter().map(|r| r.0.clone()).collect();
        let rhs: Vec<f64> = rows.iter().map(|r| r.1 - dot(&r.0, x)).collect();
        linalg::min_norm_point(&normals, &rhs, n).map_or(f64::INFINITY, |y| y.norm())
    };
    let d_ab = va.iter().map(|x| distance_to(&rb, x)).fold(0.0, f64::max);
    let d_ba = vb.iter().map(|x| distance_to(&ra, x)).fold(0.0, f64::max);
    Ok(d_ab.max(d_ba))
}

fn enumerate_vertices(rows: &[(Vec<f64>, f64)], n: usize) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for subset in (0..rows.len()).combinations(n) {
        let a = DMatrix::from_fn(n, n, |r, c| rows[subset[r]].0[c]);
        let b = DVector::from_fn(n, |r, _| rows[subset[r]].1);
        let Some(x) = linalg::solve_square(a, b) else { continue };
        let xn = x.norm();
        let feasible = rows
            .iter()
            .all(|(a, b)| dot(a, &x) <= b + 1e-10 * (1.0 + b.abs() + xn));
        if feasible && !out.iter().any(|y| (y - &x).norm() <= 1e-9 * (1.0 + xn)) {
            out.push(x);
        }
    }
    out
}

fn clip_segment(seg: &[Vector], u: &UnitVector, h: f64) -> Vec<Vector> {
    let d0 = dot(u, &seg[0]) - h;
    let d1 = dot(u, &seg[1]) - h;
    match (d0 <= 0.0, d1 <= 0.0) {
        (true, true) => seg.to_vec(),
        (false, false) => Vec::new(),
        _ => {
            let s = d0 / (d0 - d1);
            let cut = &seg[0] + (&seg[1] - &seg[0]) * s;
            if d0 <= 0.0 {
                vec![seg[0].clone(), cut]
            } else {
                vec![cut, seg[1].clone()]
            }
        }
    }
}

/// Sutherland–Hodgman clip of a planar polygon in R^3 against `u·x ≤ h`.
fn clip_polygon(poly: &[Vector], u: &UnitVector, h: f64) -> Vec<Vector> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    for k in 0..poly.len() {
        let p = &poly[k];
        let q = &poly[(k + 1) % poly.len()];
        let dp = dot(u, p) - h;
        let dq = dot(u, q) - h;
        if dp <= 0.0 {
            out.push(p.clone());
        }
        if (dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0) {
            let s = dp / (dp - dq);
            out.push(p + (q - p) * s);
        }
    }
    out
}

fn polygon_area(poly: &[Vector]) -> f64 {
    let mut acc = [0.0; 3];
    for k in 1..poly.len() - 1 {
        let a = &poly[k] - &poly[0];
        let b = &poly[k + 1] - &poly[0];
        let c = linalg::cross3(a.as_slice(), b.as_slice());
        for (s, x) in acc.iter_mut().zip(c) {
            *s += x;
        }
    }
    0.5 * norm(&acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn uv(v: &[f64]) -> UnitVector {
        UnitVector::from_slice(v).unwrap()
    }

    fn p1() -> CPolytope {
        wulff_shape(&Cone::orthant(2).unwrap(), &[(uv(&[-1.0, -1.0]), 1.0)]).unwrap()
    }

    fn two_facet() -> CPolytope {
        CPolytope::new(Cone::orthant(2).unwrap(), vec![
            Facet { u: uv(&[-1.0, -1.0]), h: -1.0 },
            Facet { u: uv(&[-0.8, -0.6]), h: -1.0 },
        ])
        .unwrap()
    }

    #[test]
    fn wulff_shape_of_single_atom_is_the_triangle_complement() {
        let p = p1();
        assert_eq!(p.facets()[0].h, -1.0);
        let mut verts: Vec<Vec<f64>> = p.vertices().iter().map(|v| v.as_slice().to_vec()).collect();
        verts.sort_by(|a, b| a[0].total_cmp(&b[0]));
        assert!((verts[0][1] - SQRT_2).abs() < 1e-14 && verts[0][0].abs() < 1e-14);
        assert!((verts[1][0] - SQRT_2).abs() < 1e-14 && verts[1][1].abs() < 1e-14);
    }

    #[test]
    fn wulff_second_atom_can_be_inactive() {
        let p = wulff_shape(&Cone::orthant(2).unwrap(), &[(uv(&[-1.0, -1.0]), 1.0), (uv(&[-0.8, -0.6]), 0.1)]).unwrap();
        // sup over {x, y ≥ 0, x + y ≥ √2} of -0.8x - 0.6y is attained at (0, √2)
        let s = p.support(&[-0.8, -0.6]).unwrap();
        assert!((s - (-0.6 * SQRT_2)).abs() < 1e-14);
        assert!(s < -0.1);
        assert!(!p.facet_geometry().unwrap()[1].is_active());
    }

    #[test]
    fn wulff_rejects_bad_input() {
        let c = Cone::orthant(2).unwrap();
        assert!(matches!(wulff_shape(&c, &[]), Err(Error::NoFacets)));
        assert!(matches!(wulff_shape(&c, &[(uv(&[1.0, -1.0]), 1.0)]), Err(Error::InvalidDirection { index: 0 })));
        assert!(matches!(wulff_shape(&c, &[(uv(&[-1.0, -1.0]), 0.0)]), Err(Error::NonPositive { index: 0, .. })));
        assert!(matches!(
            wulff_shape(&c, &[(uv(&[-1.0, -1.0]), 1.0), (uv(&[-2.0, -2.0]), 2.0)]),
            Err(Error::DuplicateDirection { first: 0, second: 1 })
        ));
    }

    #[test]
    fn radial_examples() {
        let p = p1();
        let hit = p.radial(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        assert!((hit.rho - 1.0).abs() < 1e-15 && hit.facet == 0);
        let hit = p.radial(&[0.2f64.cos(), 0.2f64.sin()]).unwrap();
        let expected = SQRT_2 / (0.2f64.cos() + 0.2f64.sin());
        assert!((hit.rho - expected).abs() < 1e-15);
        assert!((hit.rho - 1.19977).abs() < 1e-5);
        assert!(matches!(p.radial(&[1.0, 0.0]), Err(Error::OutsideOmega)));
    }

    #[test]
    fn radial_gauss_map_switches_at_the_tie_angle() {
        let p = two_facet();
        let theta_star = ((0.8 * SQRT_2 - 1.0) / (1.0 - 0.6 * SQRT_2)).atan();
        assert!((theta_star - 0.71445).abs() < 1e-5);
        let at = |t: f64| p.radial(&[t.cos(), t.sin()]).unwrap();
        assert_eq!(at(theta_star - 1e-6).facet, 0);
        assert_eq!(at(theta_star + 1e-6).facet, 1);
        assert!(at(theta_star).tie);
        assert!(!at(0.3).tie);
    }

    #[test]
    fn support_examples() {
        let p = p1();
        assert!((p.support(&[-FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).unwrap() + 1.0).abs() < 1e-15);
        let s5 = 5f64.sqrt();
        let a = p.support(&[-2.0 / s5, -1.0 / s5]).unwrap();
        let b = p.support(&[-1.0 / s5, -2.0 / s5]).unwrap();
        assert!((a + SQRT_2 / s5).abs() < 1e-15 && (b + SQRT_2 / s5).abs() < 1e-15);
        assert!(matches!(p.support(&[1.0, 0.0]), Err(Error::OutsideOmega)));
        assert!(matches!(p.support_unchecked(&[1.0, 0.0]), Err(Error::Unbounded)));
    }

    #[test]
    fn copolar_radial_examples() {
        let p = p1();
        assert!((p.copolar_radial(&[-FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).unwrap() - 1.0).abs() < 1e-15);
        let s5 = 5f64.sqrt();
        let u = [-2.0 / s5, -1.0 / s5];
        assert!((p.copolar_radial(&u).unwrap() - s5 / SQRT_2).abs() < 1e-14);
        let q = p.dilate(2.0).unwrap();
        assert!((q.copolar_radial(&u).unwrap() - 0.5 * p.copolar_radial(&u).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn p_co_sum_examples() {
        let p = p1();
        let s1 = p_co_sum(&p, &p, 1.0, None).unwrap();
        assert!((s1.facets()[0].h + 2.0).abs() < 1e-15);
        let s_half = p_co_sum(&p, &p, 0.5, None).unwrap();
        assert!((s_half.facets()[0].h + 4.0).abs() < 1e-14);
        let log = p_co_sum(&p, &p.dilate(4.0).unwrap(), 0.0, Some(0.5)).unwrap();
        assert!((log.facets()[0].h + 2.0).abs() < 1e-15);
        assert!(matches!(p_co_sum(&p, &two_facet(), 1.0, None), Err(Error::MismatchedNormals)));
        assert!(matches!(p_co_sum(&p, &p, 1.5, None), Err(Error::InvalidP { .. })));
    }

    #[test]
    fn facet_geometry_examples() {
        let g = p1().facet_geometry().unwrap().to_vec();
        assert_eq!(g.len(), 1);
        assert!((g[0].measure - 2.0).abs() < 1e-14);

        let two = two_facet();
        let g = two.facet_geometry().unwrap();
        assert!(g[0].is_active() && g[1].is_active());
        let theta_star = ((0.8 * SQRT_2 - 1.0) / (1.0 - 0.6 * SQRT_2)).atan();
        let shared: Vec<&Vector> =
            g[0].vertices.iter().filter(|a| g[1].vertices.iter().any(|b| (*a - b).norm() < 1e-12)).collect();
        assert_eq!(shared.len(), 1);
        assert!((shared[0][1].atan2(shared[0][0]) - theta_star).abs() < 1e-12);

        let cube = wulff_shape(&Cone::orthant(4).unwrap(), &[(uv(&[-1.0; 4]), 1.0)]).unwrap();
        assert!(matches!(cube.facet_geometry(), Err(Error::UnsupportedDim { dim: 4, .. })));
    }

    #[test]
    fn facet_polygon_in_three_dimensions() {
        // x + y + z ≥ √3 in the octant: equilateral triangle with side √6
        let p = wulff_shape(&Cone::orthant(3).unwrap(), &[(uv(&[-1.0, -1.0, -1.0]), 1.0)]).unwrap();
        let g = &p.facet_geometry().unwrap()[0];
        assert_eq!(g.vertices.len(), 3);
        let side = 6f64.sqrt();
        assert!((g.measure - 3f64.sqrt() / 4.0 * side * side).abs() < 1e-13);
        // volume of the corner simplex with legs √3
        assert!((p.coconvex_volume().unwrap() - 3f64.sqrt().powi(3) / 6.0).abs() < 1e-13);
    }

    #[test]
    fn b_distance_examples() {
        let p = p1();
        assert!((p.b_distance() - 1.0).abs() < 1e-14);
        assert!((p.dilate(2.0).unwrap().b_distance() - 2.0).abs() < 1e-14);
        let corner = CPolytope::new(Cone::orthant(2).unwrap(), vec![
            Facet { u: uv(&[-1.0, -1e-3]), h: -1.0 },
            Facet { u: uv(&[-1e-3, -1.0]), h: -1.0 },
        ])
        .unwrap();
        // nearly {x ≥ 1, y ≥ 1}; the exact corner solves both equalities
        let m = nalgebra::Matrix2::new(-1.0, -1e-3, -1e-3, -1.0) / (1.0f64 + 1e-6).sqrt();
        let x = m.try_inverse().unwrap() * nalgebra::Vector2::new(-1.0, -1.0);
        assert!((corner.b_distance() - x.norm()).abs() < 1e-13);
    }

    #[test]
    fn circular_support_and_distance() {
        // 45° cone around e_3 cut by x_3 ≥ 1
        let cone = Cone::circular(&[0.0, 0.0, 1.0], std::f64::consts::FRAC_PI_4).unwrap();
        let p = CPolytope::new(cone, vec![Facet { u: uv(&[0.0, 0.0, -1.0]), h: -1.0 }]).unwrap();
        assert!((p.support(&[0.0, 0.0, -1.0]).unwrap() + 1.0).abs() < 1e-12);
        assert!((p.b_distance() - 1.0).abs() < 1e-9);
        // tilted direction: the maximizer sits on the rim of the disk x_3 = 1, |x'| ≤ 1
        let u = uv(&[0.3, 0.0, -1.0]);
        let expected = (0.3 * 1.0 - 1.0) / (1.09f64).sqrt();
        assert!((p.support(u.as_slice()).unwrap() - expected).abs() < 1e-10);
    }

    #[test]
    fn hausdorff_examples() {
        let p = p1();
        let q = p.dilate(1.1).unwrap();
        assert_eq!(hausdorff_truncated(&p, &p, 10.0).unwrap(), 0.0);
        let d = hausdorff_truncated(&p, &q, 10.0).unwrap();
        assert!((d - 0.1).abs() < 1e-12);
        assert_eq!(d, hausdorff_truncated(&q, &p, 10.0).unwrap());
        assert!(matches!(hausdorff_truncated(&p, &q, 0.5), Err(Error::EmptyTruncation { .. })));
    }
}
