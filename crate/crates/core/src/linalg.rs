//! Small dense helpers for the low dimensions (n ≤ 4) this crate works in.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

/// Anything that can be viewed as a coordinate slice.
pub(crate) trait Coords {
    fn coords(&self) -> &[f64];
}

impl Coords for [f64] {
    fn coords(&self) -> &[f64] {
        self
    }
}

impl<const N: usize> Coords for [f64; N] {
    fn coords(&self) -> &[f64] {
        self
    }
}

impl Coords for Vec<f64> {
    fn coords(&self) -> &[f64] {
        self
    }
}

impl Coords for DVector<f64> {
    fn coords(&self) -> &[f64] {
        self.as_slice()
    }
}

impl<T: Coords + ?Sized> Coords for &T {
    fn coords(&self) -> &[f64] {
        (**self).coords()
    }
}

pub(crate) fn dot<A: Coords + ?Sized, B: Coords + ?Sized>(a: &A, b: &B) -> f64 {
    a.coords().iter().zip(b.coords()).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm<A: Coords + ?Sized>(a: &A) -> f64 {
    dot(a, a).sqrt()
}

/// Compensated (Neumaier) running sum. Summation order is the caller's
/// responsibility; the accumulator only removes most of the rounding drift.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn merge(&mut self, other: &KahanSum) {
        self.add(other.sum);
        self.add(other.carry);
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub(crate) fn kahan_total<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = KahanSum::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Generalized cross product of `n - 1` vectors in R^n: the vector whose dot
/// product with any `x` equals `det[rows; x]`. Zero iff the rows are dependent.
pub(crate) fn generalized_cross(rows: &[&[f64]], n: usize) -> DVector<f64> {
    debug_assert_eq!(rows.len(), n - 1);
    let mut out = DVector::zeros(n);
    for k in 0..n {
        let minor = DMatrix::from_fn(n - 1, n - 1, |r, c| {
            let col = if c < k { c } else { c + 1 };
            rows[r][col]
        });
        let det = if n == 1 { 1.0 } else { minor.determinant() };
        // expansion along the last row of [rows; x]
        let sign = if (n - 1 + k) % 2 == 0 { 1.0 } else { -1.0 };
        out[k] = sign * det;
    }
    out
}

pub(crate) fn rank(vectors: &[&[f64]], n: usize, tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(vectors.len(), n, |r, c| vectors[r][c]);
    m.svd(false, false)
        .singular_values
        .iter()
        .filter(|s| **s > tol)
        .count()
}

/// Solves a square system, rejecting (numerically) singular matrices.
pub(crate) fn solve_square(a: DMatrix<f64>, b: DVector<f64>) -> Option<DVector<f64>> {
    let scale = a.amax().max(1e-300);
    let lu = a.clone().lu();
    let det = lu.determinant();
    let n = a.nrows() as i32;
    if !det.is_finite() || det.abs() <= 1e-12 * scale.powi(n) {
        return None;
    }
    let x = lu.solve(&b)?;
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Minimum-norm point of the polyhedron `{x : a_k·x ≤ b_k}` by enumerating
/// candidate active sets. Exact up to roundoff; intended for a few dozen
/// constraints in dimension at most four.
pub(crate) fn min_norm_point(normals: &[Vec<f64>], rhs: &[f64], n: usize) -> Option<DVector<f64>> {
    let feasible = |x: &DVector<f64>| {
        normals.iter().zip(rhs).all(|(a, b)| {
            let ax = dot(a, x.as_slice());
            ax <= b + 1e-10 * (1.0 + b.abs() + norm(a) * x.norm())
        })
    };
    let zero = DVector::zeros(n);
    if feasible(&zero) {
        return Some(zero);
    }
    let mut best: Option<DVector<f64>> = None;
    for size in 1..=n.min(normals.len()) {
        for subset in (0..normals.len()).combinations(size) {
            let gram = DMatrix::from_fn(size, size, |r, c| dot(&normals[subset[r]], &normals[subset[c]]));
            let b = DVector::from_fn(size, |r, _| rhs[subset[r]]);
            let Some(mult) = solve_square(gram, b) else { continue };
            let mut x = DVector::zeros(n);
            for (r, &k) in subset.iter().enumerate() {
                for c in 0..n {
                    x[c] += mult[r] * normals[k][c];
                }
            }
            if !feasible(&x) {
                continue;
            }
            if best.as_ref().is_none_or(|bx| x.norm() < bx.norm()) {
                best = Some(x);
            }
        }
    }
    best
}

/// Minimum-norm point of the convex hull of `points`.
pub(crate) fn min_norm_in_hull(points: &[&[f64]], n: usize) -> DVector<f64> {
    let mut best: Option<DVector<f64>> = None;
    for size in 1..=points.len().min(n + 1) {
        for subset in (0..points.len()).combinations(size) {
            // KKT system of min |Σ λ_j p_j|² subject to Σ λ_j = 1
            let mut kkt = DMatrix::zeros(size + 1, size + 1);
            for r in 0..size {
                for c in 0..size {
                    kkt[(r, c)] = dot(points[subset[r]], points[subset[c]]);
                }
                kkt[(r, size)] = 1.0;
                kkt[(size, r)] = 1.0;
            }
            let mut rhs = DVector::zeros(size + 1);
            rhs[size] = 1.0;
            let Some(sol) = solve_square(kkt, rhs) else { continue };
            if (0..size).any(|j| sol[j] < -1e-12) {
                continue;
            }
            let mut x = DVector::zeros(n);
            for (j, &k) in subset.iter().enumerate() {
                for c in 0..n {
                    x[c] += sol[j] * points[k][c];
                }
            }
            if best.as_ref().is_none_or(|bx| x.norm() < bx.norm()) {
                best = Some(x);
            }
        }
    }
    best.unwrap_or_else(|| DVector::zeros(n))
}

/// Gauss–Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
pub(crate) fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let m = order.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = order as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

/// Nodes and weights of a Gauss rule on `[a, b]`.
pub(crate) fn gauss_on(order: usize, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.into_iter().zip(w).map(move |(x, w)| (mid + half * x, half * w))
}

/// Seven-point degree-5 rule on the reference triangle, as barycentric
/// coordinates with weights summing to one.
pub(crate) fn triangle_rule() -> [([f64; 3], f64); 7] {
    let s15 = 15f64.sqrt();
    let a = (6.0 - s15) / 21.0;
    let b = (9.0 + 2.0 * s15) / 21.0;
    let c = (6.0 + s15) / 21.0;
    let d = (9.0 - 2.0 * s15) / 21.0;
    let wa = (155.0 - s15) / 1200.0;
    let wc = (155.0 + s15) / 1200.0;
    let third = 1.0 / 3.0;
    [
        ([third, third, third], 9.0 / 40.0),
        ([a, a, b], wa),
        ([a, b, a], wa),
        ([b, a, a], wa),
        ([c, c, d], wc),
        ([c, d, c], wc),
        ([d, c, c], wc),
    ]
}

pub(crate) fn det3(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

pub(crate) fn cross3(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_integrates_polynomials_exactly() {
        for order in [1, 2, 5, 8] {
            let deg = 2 * order - 1;
            let approx: f64 = gauss_on(order, 0.0, 2.0).map(|(x, w)| w * x.powi(deg as i32)).sum();
            let exact = 2f64.powi(deg as i32 + 1) / (deg as f64 + 1.0);
            assert!((approx - exact).abs() < 1e-12 * exact, "order {order}");
        }
    }

    #[test]
    fn triangle_rule_is_degree_five() {
        // ∫ x^2 y^3 over the reference triangle = 2! 3! / 7! = 1/420
        let approx: f64 = triangle_rule()
            .iter()
            .map(|(b, w)| 0.5 * w * b[1].powi(2) * b[2].powi(3))
            .sum();
        assert!((approx - 1.0 / 420.0).abs() < 1e-15);
    }

    #[test]
    fn generalized_cross_is_orthogonal() {
        let r1 = [1.0, 2.0, 0.5, -1.0];
        let r2 = [0.0, 1.0, 3.0, 2.0];
        let r3 = [2.0, -1.0, 1.0, 0.0];
        let w = generalized_cross(&[&r1, &r2, &r3], 4);
        for r in [r1, r2, r3] {
            assert!(dot(&r, w.as_slice()).abs() < 1e-12);
        }
        assert!(w.norm() > 1e-3);
        let c = generalized_cross(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]], 3);
        assert_eq!(c.as_slice(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn min_norm_point_of_corner() {
        // {x ≥ 1, y ≥ 1} written as -x ≤ -1, -y ≤ -1
        let x = min_norm_point(&[vec![-1.0, 0.0], vec![0.0, -1.0]], &[-1.0, -1.0], 2).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hull_min_norm_detects_origin() {
        let pts: [&[f64]; 2] = [&[1.0, 0.0], &[-1.0, 0.0]];
        assert!(min_norm_in_hull(&pts, 2).norm() < 1e-14);
        let pts: [&[f64]; 2] = [&[1.0, 0.0], &[0.0, 1.0]];
        let x = min_norm_in_hull(&pts, 2);
        assert!((x[0] - 0.5).abs() < 1e-14 && (x[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn kahan_beats_naive_sum() {
        let vals: Vec<f64> = std::iter::once(1.0).chain(std::iter::repeat_n(1e-16, 1000)).collect();
        assert!((kahan_total(vals) - (1.0 + 1e-13)).abs() < 1e-16);
    }
}
