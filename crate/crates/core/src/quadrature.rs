//! Deterministic quadrature on the spherical domain `Ω_C`.
//!
//! A grid is a list of cells, each carrying a fixed number of nodes:
//!
//! * planar cones: Gauss–Legendre panels on the arc of angles;
//! * polyhedral cones in R^3: flat triangles in the central (gnomonic)
//!   projection onto the plane `ξ·y = 1`, refined by midpoint subdivision
//!   (their edges are great-circle arcs) with a degree-5 triangle rule and
//!   the Jacobian `|y|^{-3}`;
//! * circular cones in R^3: a tensor Gauss rule in (polar angle, azimuth);
//! * dimension four: seeded Monte Carlo.
//!
//! For C-polytopes, integrals over the facet regions of the radial Gauss map
//! are computed by clipping: in the central projection every region is a
//! convex polygon bounded by the lines `(h_i u_j - h_j u_i)·y = 0`, so a cell
//! whose corners carry the same label lies entirely in that region and any
//! other cell is cut exactly. Circular caps fall back to adaptive refinement
//! with node classification on mixed cells.
//!
//! Sums run in a fixed cell order with compensated accumulation and fixed
//! chunk boundaries, so results do not depend on the number of threads.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone::{tangent_basis, Cone};
use crate::error::{Error, Result};
use crate::linalg::{dot, gauss_legendre, gauss_on, triangle_rule, KahanSum};
use crate::polytope::CPolytope;

pub const MIN_RESOLUTION: usize = 16;

/// Cells per parallel work unit; fixed so that reductions are reproducible.
const CHUNK: usize = 64;
const CAP_ORDER: usize = 4;
const CAP_MAX_DEPTH: usize = 6;
/// Upper bound on Monte Carlo draws per accepted node.
const MAX_DRAWS_PER_NODE: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    GaussArc,
    GeodesicSubdivision,
    CapProduct,
    MonteCarlo,
}

#[derive(Clone, Debug)]
struct Frame {
    o: [f64; 3],
    e1: [f64; 3],
    e2: [f64; 3],
}

impl Frame {
    fn around(o: &[f64]) -> Frame {
        let (e1, e2) = tangent_basis(o);
        Frame { o: [o[0], o[1], o[2]], e1, e2 }
    }

    fn lift(&self, p: [f64; 2]) -> [f64; 3] {
        std::array::from_fn(|k| self.o[k] + p[0] * self.e1[k] + p[1] * self.e2[k])
    }

    /// Direction at polar angle `psi` from `o` and azimuth `phi`.
    fn direction(&self, psi: f64, phi: f64) -> [f64; 3] {
        let (s, c) = psi.sin_cos();
        let (sp, cp) = phi.sin_cos();
        std::array::from_fn(|k| c * self.o[k] + s * (cp * self.e1[k] + sp * self.e2[k]))
    }
}

#[derive(Clone, Debug)]
enum Cells {
    Arc { panels: Vec<(f64, f64)>, order: usize },
    Plane { frame: Frame, tris: Vec<[[f64; 2]; 3]> },
    Cap { frame: Frame, patches: Vec<[f64; 4]> },
    Samples { drawn: usize },
}

/// Nodes and weights covering `Ω_C`.
#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    cone: Cone,
    resolution: usize,
    seed: u64,
    scheme: Scheme,
    coords: Vec<f64>,
    weights: Vec<f64>,
    per_cell: usize,
    cells: Cells,
}

/// Builds the grid of `cone` at the given resolution. The resolution is the
/// node count for planar cones and Monte Carlo, and the approximate cell
/// count otherwise. `seed` only affects the Monte Carlo scheme.
pub fn make_grid(cone: &Cone, resolution: usize, seed: u64) -> Result<QuadratureGrid> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::Invalid(format!("grid resolution must be at least {MIN_RESOLUTION}, got {resolution}")));
    }
    QuadratureGrid::build(cone, resolution, seed)
}

impl QuadratureGrid {
    fn build(cone: &Cone, resolution: usize, seed: u64) -> Result<QuadratureGrid> {
        match cone.dim() {
            2 => Ok(Self::arc(cone, resolution)),
            3 if cone.has_facets() => Ok(Self::plane(cone, resolution)),
            3 => Ok(Self::cap(cone, resolution)),
            4 => Self::monte_carlo(cone, resolution, seed),
            dim => Err(Error::UnsupportedDim { what: "quadrature grid", dim }),
        }
    }

    fn arc(cone: &Cone, resolution: usize) -> QuadratureGrid {
        let (lo, hi) = cone.planar_arc().expect("planar cone");
        let order = [8, 4, 2, 1].into_iter().find(|o| resolution % o == 0).unwrap_or(1);
        let count = resolution / order;
        let width = (hi - lo) / count as f64;
        let panels: Vec<(f64, f64)> = (0..count)
            .map(|k| (lo + k as f64 * width, if k + 1 == count { hi } else { lo + (k + 1) as f64 * width }))
            .collect();
        let mut coords = Vec::with_capacity(2 * resolution);
        let mut weights = Vec::with_capacity(resolution);
        for &(a, b) in &panels {
            for (t, w) in gauss_on(order, a, b) {
                coords.extend([t.cos(), t.sin()]);
                weights.push(w);
            }
        }
        QuadratureGrid {
            cone: cone.clone(),
            resolution,
            seed: 0,
            scheme: Scheme::GaussArc,
            coords,
            weights,
            per_cell: order,
            cells: Cells::Arc { panels, order },
        }
    }

    fn plane(cone: &Cone, resolution: usize) -> QuadratureGrid {
        let frame = Frame::around(cone.reference_direction().as_slice());
        let corners: Vec<[f64; 2]> = cone
            .generators()
            .iter()
            .map(|g| {
                let y: Vec<f64> = g.iter().map(|x| x / dot(g, &frame.o)).collect();
                [dot(&y, &frame.e1), dot(&y, &frame.e2)]
            })
            .collect();
        let k = corners.len();
        let mut tris: Vec<[[f64; 2]; 3]> =
            (0..k).map(|i| [[0.0, 0.0], corners[i], corners[(i + 1) % k]]).collect();
        while tris.len() < resolution {
            tris = tris.iter().flat_map(|t| subdivide(t)).collect();
        }
        let rule = triangle_rule();
        let mut coords = Vec::with_capacity(21 * tris.len());
        let mut weights = Vec::with_capacity(7 * tris.len());
        for t in &tris {
            let area = tri_area(t);
            for (b, w) in &rule {
                let (v, jac) = gnomonic_node(&frame, t, b);
                coords.extend(v);
                weights.push(area * w * jac);
            }
        }
        QuadratureGrid {
            cone: cone.clone(),
            resolution,
            seed: 0,
            scheme: Scheme::GeodesicSubdivision,
            coords,
            weights,
            per_cell: 7,
            cells: Cells::Plane { frame, tris },
        }
    }

    fn cap(cone: &Cone, resolution: usize) -> QuadratureGrid {
        let (axis, alpha) = cone.circular_params().expect("circular cone");
        let frame = Frame::around(axis.as_slice());
        let n_psi = ((resolution as f64 / 4.0).sqrt().ceil() as usize).max(1);
        let n_phi = 4 * n_psi;
        let mut patches = Vec::with_capacity(n_psi * n_phi);
        for i in 0..n_psi {
            for j in 0..n_phi {
                patches.push([
                    alpha * i as f64 / n_psi as f64,
                    alpha * (i + 1) as f64 / n_psi as f64,
                    2.0 * PI * j as f64 / n_phi as f64,
                    2.0 * PI * (j + 1) as f64 / n_phi as f64,
                ]);
            }
        }
        let mut coords = Vec::with_capacity(3 * CAP_ORDER * CAP_ORDER * patches.len());
        let mut weights = Vec::with_capacity(CAP_ORDER * CAP_ORDER * patches.len());
        for patch in &patches {
            for (v, w) in cap_nodes(&frame, patch) {
                coords.extend(v);
                weights.push(w);
            }
        }
        QuadratureGrid {
            cone: cone.clone(),
            resolution,
            seed: 0,
            scheme: Scheme::CapProduct,
            coords,
            weights,
            per_cell: CAP_ORDER * CAP_ORDER,
            cells: Cells::Cap { frame, patches },
        }
    }

    fn monte_carlo(cone: &Cone, resolution: usize, seed: u64) -> Result<QuadratureGrid> {
        let n = cone.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coords = Vec::with_capacity(n * resolution);
        let mut drawn = 0usize;
        let mut v = vec![0.0; n];
        while coords.len() < n * resolution {
            if drawn >= MAX_DRAWS_PER_NODE * resolution {
                return Err(Error::Invalid("cone too narrow for Monte Carlo sampling".into()));
            }
            drawn += 1;
            for x in v.iter_mut() {
                *x = StandardNormal.sample(&mut rng);
            }
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if r == 0.0 {
                continue;
            }
            v.iter_mut().for_each(|x| *x /= r);
            if cone.omega_contains(&v) {
                coords.extend_from_slice(&v);
            }
        }
        let w = sphere_area(n) / drawn as f64;
        Ok(QuadratureGrid {
            cone: cone.clone(),
            resolution,
            seed,
            scheme: Scheme::MonteCarlo,
            coords,
            weights: vec![w; resolution],
            per_cell: 1,
            cells: Cells::Samples { drawn },
        })
    }

    /// A grid of roughly half the linear resolution, used for error
    /// estimates. `None` for Monte Carlo grids.
    pub fn coarsened(&self) -> Option<QuadratureGrid> {
        match &self.cells {
            Cells::Arc { .. } => Some(Self::arc(&self.cone, (self.resolution / 2).max(1))),
            Cells::Plane { tris, .. } => Some(Self::plane(&self.cone, (tris.len() / 4).max(1))),
            Cells::Cap { .. } => Some(Self::cap(&self.cone, (self.resolution / 4).max(4))),
            Cells::Samples { .. } => None,
        }
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, k: usize) -> &[f64] {
        let n = self.dim();
        &self.coords[n * k..n * (k + 1)]
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of Monte Carlo draws behind the grid (accepted or not).
    pub fn draws(&self) -> Option<usize> {
        match self.cells {
            Cells::Samples { drawn } => Some(drawn),
            _ => None,
        }
    }

    pub fn weight_sum(&self) -> f64 {
        self.integrate(|_| 1.0)
    }

    /// `Σ_k w_k f(v_k)` in fixed order.
    pub fn integrate<F: Fn(&[f64]) -> f64 + Sync>(&self, f: F) -> f64 {
        let n = self.dim();
        let block = CHUNK * self.per_cell;
        let partials: Vec<KahanSum> = self
            .weights
            .par_chunks(block)
            .zip(self.coords.par_chunks(block * n))
            .map(|(ws, cs)| {
                let mut acc = KahanSum::default();
                for (w, v) in ws.iter().zip(cs.chunks_exact(n)) {
                    acc.add(w * f(v));
                }
                acc
            })
            .collect();
        let mut total = KahanSum::default();
        for p in &partials {
            total.merge(p);
        }
        total.value()
    }

    fn cell_count(&self) -> usize {
        match &self.cells {
            Cells::Arc { panels, .. } => panels.len(),
            Cells::Plane { tris, .. } => tris.len(),
            Cells::Cap { patches, .. } => patches.len(),
            Cells::Samples { .. } => self.weights.len(),
        }
    }

    /// Per-facet integrals `∫_{region_i} g(i, ρ(v)) dv` over the regions of
    /// the radial Gauss map of `p`, where `ρ` on region `i` is evaluated with
    /// facet `i`'s own formula `h_i / (u_i·v)`.
    pub(crate) fn region_sums<const K: usize, G>(&self, p: &CPolytope, g: G) -> Vec<[f64; K]>
    where
        G: Fn(usize, f64) -> [f64; K] + Sync,
    {
        let m = p.len();
        let cells = self.cell_count();
        let chunks = cells.div_ceil(CHUNK);
        let partials: Vec<Vec<[KahanSum; K]>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = vec![[KahanSum::default(); K]; m];
                for k in c * CHUNK..((c + 1) * CHUNK).min(cells) {
                    self.cell_sums(k, p, &g, &mut acc);
                }
                acc
            })
            .collect();
        let mut total = vec![[KahanSum::default(); K]; m];
        for part in &partials {
            for (t, s) in total.iter_mut().zip(part) {
                for j in 0..K {
                    t[j].merge(&s[j]);
                }
            }
        }
        total.iter().map(|t| std::array::from_fn(|j| t[j].value())).collect()
    }

    fn cell_sums<const K: usize, G>(&self, k: usize, p: &CPolytope, g: &G, acc: &mut [[KahanSum; K]])
    where
        G: Fn(usize, f64) -> [f64; K],
    {
        let add = |acc: &mut [[KahanSum; K]], i: usize, w: f64, v: &[f64]| {
            let f = &p.facets()[i];
            let vals = g(i, f.h / dot(&f.u, v));
            for j in 0..K {
                acc[i][j].add(w * vals[j]);
            }
        };
        let stored = |acc: &mut [[KahanSum; K]], i: usize| {
            for node in k * self.per_cell..(k + 1) * self.per_cell {
                add(acc, i, self.weights[node], self.node(node));
            }
        };
        match &self.cells {
            Cells::Arc { panels, order } => {
                let (a, b) = panels[k];
                let la = p.radial_unchecked(&[a.cos(), a.sin()]).facet;
                let lb = p.radial_unchecked(&[b.cos(), b.sin()]).facet;
                if la == lb {
                    stored(acc, la);
                    return;
                }
                for i in 0..p.len() {
                    let Some((s, e)) = clip_arc(p, i, a, b) else { continue };
                    for (t, w) in gauss_on(*order, s, e) {
                        add(acc, i, w, &[t.cos(), t.sin()]);
                    }
                }
            }
            Cells::Plane { frame, tris } => {
                let t = &tris[k];
                let labels = t.map(|c| p.radial_unchecked(&frame.lift(c)).facet);
                if labels[0] == labels[1] && labels[1] == labels[2] {
                    stored(acc, labels[0]);
                    return;
                }
                let rule = triangle_rule();
                for i in 0..p.len() {
                    let poly = clip_to_region(p, i, frame, t);
                    for j in 1..poly.len().saturating_sub(1) {
                        let piece = [poly[0], poly[j], poly[j + 1]];
                        let area = tri_area(&piece);
                        if area <= 0.0 {
                            continue;
                        }
                        for (b, w) in &rule {
                            let (v, jac) = gnomonic_node(frame, &piece, b);
                            add(acc, i, area * w * jac, &v);
                        }
                    }
                }
            }
            Cells::Cap { frame, patches } => {
                cap_region_sums(p, frame, &patches[k], 0, &add, acc);
            }
            Cells::Samples { .. } => {
                let v = self.node(k);
                add(acc, p.radial_unchecked(v).facet, self.weights[k], v);
            }
        }
    }
}

/// Surface area of S^{n-1}.
pub fn sphere_area(n: usize) -> f64 {
    match n {
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        4 => 2.0 * PI * PI,
        _ => unreachable!("dimensions 2 to 4 only"),
    }
}

fn subdivide(t: &[[f64; 2]; 3]) -> [[[f64; 2]; 3]; 4] {
    let mid = |a: [f64; 2], b: [f64; 2]| [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
    let (a, b, c) = (t[0], t[1], t[2]);
    let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
    [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]
}

fn tri_area(t: &[[f64; 2]; 3]) -> f64 {
    0.5 * ((t[1][0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[2][0] - t[0][0]) * (t[1][1] - t[0][1])).abs()
}

/// Unit direction and Jacobian `|y|^{-3}` at barycentric point `b` of a
/// triangle in the projection plane.
fn gnomonic_node(frame: &Frame, t: &[[f64; 2]; 3], b: &[f64; 3]) -> ([f64; 3], f64) {
    let p = [
        b[0] * t[0][0] + b[1] * t[1][0] + b[2] * t[2][0],
        b[0] * t[0][1] + b[1] * t[1][1] + b[2] * t[2][1],
    ];
    let y = frame.lift(p);
    let r = dot(&y, &y).sqrt();
    ([y[0] / r, y[1] / r, y[2] / r], 1.0 / (r * r * r))
}

/// Portion of the arc `[a, b]` where facet `i` attains the radial maximum.
fn clip_arc(p: &CPolytope, i: usize, a: f64, b: f64) -> Option<(f64, f64)> {
    let fi = &p.facets()[i];
    let (mut s, mut e) = (a, b);
    for (j, fj) in p.facets().iter().enumerate() {
        if j == i {
            continue;
        }
        let c = [fi.h * fj.u[0] - fj.h * fi.u[0], fi.h * fj.u[1] - fj.h * fi.u[1]];
        let val = |t: f64| c[0] * t.cos() + c[1] * t.sin();
        let (fs, fe) = (val(s), val(e));
        if fs >= 0.0 && fe >= 0.0 {
            continue;
        }
        if fs < 0.0 && fe < 0.0 {
            return None;
        }
        // the sinusoid vanishes where (cos t, sin t) ⟂ c; the two zeros are π apart
        let root = s + (c[0].atan2(-c[1]) - s).rem_euclid(PI);
        let root = root.clamp(s, e);
        if fs >= 0.0 {
            e = root;
        } else {
            s = root;
        }
        if e <= s {
            return None;
        }
    }
    Some((s, e))
}

/// Clip a cell of the projection plane to the region of facet `i`.
fn clip_to_region(p: &CPolytope, i: usize, frame: &Frame, t: &[[f64; 2]; 3]) -> Vec<[f64; 2]> {
    let fi = &p.facets()[i];
    let mut poly: Vec<[f64; 2]> = t.to_vec();
    for (j, fj) in p.facets().iter().enumerate() {
        if j == i {
            continue;
        }
        let c: [f64; 3] = std::array::from_fn(|k| fi.h * fj.u[k] - fj.h * fi.u[k]);
        let (c0, c1, c2) = (dot(&c, &frame.o), dot(&c, &frame.e1), dot(&c, &frame.e2));
        let val = |q: &[f64; 2]| c0 + c1 * q[0] + c2 * q[1];
        let mut out = Vec::with_capacity(poly.len() + 1);
        for k in 0..poly.len() {
            let a = poly[k];
            let b = poly[(k + 1) % poly.len()];
            let (da, db) = (val(&a), val(&b));
            if da >= 0.0 {
                out.push(a);
            }
            if (da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0) {
                let s = da / (da - db);
                out.push([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]);
            }
        }
        poly = out;
        if poly.len() < 3 {
            return Vec::new();
        }
    }
    poly
}

fn cap_nodes(frame: &Frame, patch: &[f64; 4]) -> Vec<([f64; 3], f64)> {
    let (xs, ws) = gauss_legendre(CAP_ORDER);
    let mut out = Vec::with_capacity(CAP_ORDER * CAP_ORDER);
    let (hp, mp) = (0.5 * (patch[1] - patch[0]), 0.5 * (patch[1] + patch[0]));
    let (hf, mf) = (0.5 * (patch[3] - patch[2]), 0.5 * (patch[3] + patch[2]));
    for (x, wx) in xs.iter().zip(&ws) {
        let psi = mp + hp * x;
        for (y, wy) in xs.iter().zip(&ws) {
            let phi = mf + hf * y;
            out.push((frame.direction(psi, phi), hp * wx * hf * wy * psi.sin()));
        }
    }
    out
}

fn cap_region_sums<const K: usize, F>(
    p: &CPolytope,
    frame: &Frame,
    patch: &[f64; 4],
    depth: usize,
    add: &F,
    acc: &mut [[KahanSum; K]],
) where
    F: Fn(&mut [[KahanSum; K]], usize, f64, &[f64]),
{
    let nodes = cap_nodes(frame, patch);
    let labels: Vec<usize> = nodes.iter().map(|(v, _)| p.radial_unchecked(v).facet).collect();
    let corner_labels = [(0, 2), (0, 3), (1, 2), (1, 3)]
        .map(|(a, b)| p.radial_unchecked(&frame.direction(patch[a], patch[b])).facet);
    let first = labels[0];
    let pure = labels.iter().chain(&corner_labels).all(|&l| l == first);
    if pure || depth == CAP_MAX_DEPTH {
        for ((v, w), l) in nodes.iter().zip(&labels) {
            add(acc, *l, *w, v);
        }
        return;
    }
    let (pm, fm) = (0.5 * (patch[0] + patch[1]), 0.5 * (patch[2] + patch[3]));
    for sub in [
        [patch[0], pm, patch[2], fm],
        [patch[0], pm, fm, patch[3]],
        [pm, patch[1], patch[2], fm],
        [pm, patch[1], fm, patch[3]],
    ] {
        cap_region_sums(p, frame, &sub, depth + 1, add, acc);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::UnitVector;
    use crate::polytope::wulff_shape;

    #[test]
    fn planar_orthant_grid() {
        let c = Cone::orthant(2).unwrap();
        let g = make_grid(&c, 256, 0).unwrap();
        assert_eq!(g.len(), 256);
        assert!((g.weight_sum() - PI / 2.0).abs() < 1e-12);
        assert!(g.nodes().all(|v| c.omega_contains(v)));
    }

    #[test]
    fn cap_grid_weight_sum() {
        let c = Cone::circular(&[0.0, 0.0, 1.0], PI / 6.0).unwrap();
        let g = make_grid(&c, 64, 0).unwrap();
        assert!((g.weight_sum() - 2.0 * PI * (1.0 - (PI / 6.0).cos())).abs() < 1e-8);
        assert!(g.nodes().all(|v| c.omega_contains(v)));
    }

    #[test]
    fn octant_grid_weight_sum() {
        let c = Cone::orthant(3).unwrap();
        let g = make_grid(&c, 256, 0).unwrap();
        assert!((g.weight_sum() - PI / 2.0).abs() < 1e-8);
        assert!(g.nodes().all(|v| c.omega_contains(v)));
    }

    #[test]
    fn grids_are_deterministic() {
        for c in [Cone::orthant(2).unwrap(), Cone::orthant(3).unwrap(), Cone::orthant(4).unwrap()] {
            let a = make_grid(&c, 128, 7).unwrap();
            let b = make_grid(&c, 128, 7).unwrap();
            assert_eq!(a.coords, b.coords);
            assert_eq!(a.weights, b.weights);
        }
    }

    #[test]
    fn monte_carlo_weight_sum_within_three_sigma() {
        let c = Cone::orthant(4).unwrap();
        let g = make_grid(&c, 20_000, 3).unwrap();
        let area = 2.0 * PI * PI / 16.0;
        let frac = area / sphere_area(4);
        let sigma = sphere_area(4) * (frac * (1.0 - frac) / g.draws().unwrap() as f64).sqrt();
        assert!((g.weight_sum() - area).abs() < 3.0 * sigma);
    }

    #[test]
    fn resolution_below_minimum_is_rejected() {
        assert!(make_grid(&Cone::orthant(2).unwrap(), 8, 0).is_err());
    }

    #[test]
    fn region_areas_partition_the_domain() {
        let c = Cone::orthant(3).unwrap();
        let p = wulff_shape(&c, &[
            (UnitVector::from_slice(&[-1.0, -1.0, -1.0]).unwrap(), 1.0),
            (UnitVector::from_slice(&[-1.0, -0.2, -0.3]).unwrap(), 0.7),
            (UnitVector::from_slice(&[-0.1, -1.0, -0.4]).unwrap(), 0.6),
        ])
        .unwrap();
        assert!(p.facet_geometry().unwrap().iter().all(|f| f.is_active()));
        let g = make_grid(&c, 256, 0).unwrap();
        let areas = g.region_sums(&p, |_, _| [1.0]);
        let total: f64 = areas.iter().map(|a| a[0]).sum();
        assert!((total - PI / 2.0).abs() < 1e-8);
        assert!(areas.iter().all(|a| a[0] > 0.0));
    }
}
