//! Log-barrier interior point method for the small conic programs that show
//! up with circular cones: minimize `c·x + (γ/2)|x|²` over
//! `{x : a_k·x ≤ b_k} ∩ K`, where `K = {x : angle(x, e) ≤ α}`.

use nalgebra::{DMatrix, DVector};

use crate::linalg::dot;

pub(crate) struct ConicProgram<'a> {
    pub rows: &'a [(&'a [f64], f64)],
    pub axis: &'a [f64],
    pub half_angle: f64,
    pub c: &'a [f64],
    pub gamma: f64,
}

const GROWTH: f64 = 16.0;

impl ConicProgram<'_> {
    fn n(&self) -> usize {
        self.axis.len()
    }

    /// `ψ(x) = (tan²α + 1)(e·x)² − |x|²`, positive exactly on the interior of
    /// the double cone.
    fn psi(&self, x: &[f64]) -> f64 {
        let k = 1.0 / self.half_angle.cos().powi(2);
        let ex = dot(self.axis, x);
        k * ex * ex - dot(x, x)
    }

    fn feasible(&self, x: &[f64]) -> bool {
        dot(self.axis, x) > 0.0
            && self.psi(x) > 0.0
            && self.rows.iter().all(|(a, b)| b - dot(*a, x) > 0.0)
    }

    fn barrier_value(&self, t: f64, x: &[f64]) -> f64 {
        let obj = dot(self.c, x) + 0.5 * self.gamma * dot(x, x);
        let mut v = t * obj - self.psi(x).ln();
        for (a, b) in self.rows {
            v -= (b - dot(*a, x)).ln();
        }
        v
    }

    fn newton_system(&self, t: f64, x: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let n = self.n();
        let k = 1.0 / self.half_angle.cos().powi(2);
        let ex = dot(self.axis, x);
        let psi = self.psi(x);
        let mut g = DVector::from_fn(n, |i, _| t * (self.c[i] + self.gamma * x[i]));
        let mut h = DMatrix::from_diagonal_element(n, n, t * self.gamma);
        let dpsi = DVector::from_fn(n, |i, _| 2.0 * (k * ex * self.axis[i] - x[i]));
        for i in 0..n {
            g[i] -= dpsi[i] / psi;
            for j in 0..n {
                let d2 = 2.0 * (k * self.axis[i] * self.axis[j] - if i == j { 1.0 } else { 0.0 });
                h[(i, j)] += -d2 / psi + dpsi[i] * dpsi[j] / (psi * psi);
            }
        }
        for (a, b) in self.rows {
            let s = b - dot(*a, x);
            for i in 0..n {
                g[i] += a[i] / s;
                for j in 0..n {
                    h[(i, j)] += a[i] * a[j] / (s * s);
                }
            }
        }
        (g, h)
    }

    /// Strictly feasible starting point on the axis.
    fn start(&self) -> Option<Vec<f64>> {
        let mut s: f64 = 1.0;
        for (a, b) in self.rows {
            let ae = dot(*a, self.axis);
            if ae < 0.0 {
                s = s.max(2.0 * b / ae);
            } else if *b <= 0.0 {
                return None;
            }
        }
        let x: Vec<f64> = self.axis.iter().map(|e| s * e).collect();
        self.feasible(&x).then_some(x)
    }

    pub fn solve(&self) -> Option<Vec<f64>> {
        let mut x = self.start()?;
        let barrier_params = self.rows.len() as f64 + 2.0;
        let scale = dot(&x, &x).sqrt();
        let obj_scale = (dot(self.c, self.c).sqrt() * scale + self.gamma * scale * scale).max(1e-300);
        let mut t = barrier_params / obj_scale;
        for _ in 0..200 {
            for _ in 0..100 {
                let (g, h) = self.newton_system(t, &x);
                let Some(step) = h.clone().cholesky().map(|c| c.solve(&(-&g))) else {
                    break;
                };
                let decrement = -g.dot(&step);
                if decrement <= 1e-14 {
                    break;
                }
                let f0 = self.barrier_value(t, &x);
                let mut alpha = 1.0;
                let mut moved = false;
                for _ in 0..60 {
                    let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, di)| xi + alpha * di).collect();
                    if self.feasible(&trial) && self.barrier_value(t, &trial) <= f0 - 0.25 * alpha * decrement {
                        x = trial;
                        moved = true;
                        break;
                    }
                    alpha *= 0.5;
                }
                if !moved {
                    break;
                }
            }
            if barrier_params / t <= 1e-15 * obj_scale {
                break;
            }
            t *= GROWTH;
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_objective_over_truncated_circular_cone() {
        // maximize -x_3 over the 45° cone around e_3 cut by x_3 ≥ 1: optimum at x_3 = 1
        let rows = [(&[0.0, 0.0, -1.0][..], -1.0)];
        let prog = ConicProgram {
            rows: &rows,
            axis: &[0.0, 0.0, 1.0],
            half_angle: std::f64::consts::FRAC_PI_4,
            c: &[0.0, 0.0, 1.0],
            gamma: 0.0,
        };
        let x = prog.solve().unwrap();
        assert!((x[2] - 1.0).abs() < 1e-12, "{x:?}");
    }

    #[test]
    fn nearest_point_touches_the_cone_boundary() {
        // closest point of {x ∈ K : x_1 ≥ 1} to the origin, K the 30° cone around e_1 + e_2
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rows = [(&[-1.0, 0.0][..], -1.0)];
        let prog = ConicProgram {
            rows: &rows,
            axis: &[s, s],
            half_angle: std::f64::consts::PI / 6.0,
            c: &[0.0, 0.0],
            gamma: 1.0,
        };
        let x = prog.solve().unwrap();
        // the boundary ray at 15° from e_1 meets x_1 = 1 at (1, tan 15°)
        let expected = (std::f64::consts::PI / 12.0).tan();
        assert!((x[0] - 1.0).abs() < 1e-9 && (x[1] - expected).abs() < 1e-9, "{x:?}");
    }
}
