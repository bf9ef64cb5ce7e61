use coneminq::measures::pq_measure;
use coneminq::polytope::{hausdorff_truncated, wulff_shape};
use coneminq::quadrature::make_grid;
use coneminq::solver::{discretize_density, solve, solve_on, Problem, SolverConfig};
use coneminq::{CPolytope, Cone, UnitVector};

fn uv(v: &[f64]) -> UnitVector {
    UnitVector::from_slice(v).unwrap()
}

fn two_facets() -> CPolytope {
    let c = Cone::orthant(2).unwrap();
    wulff_shape(&c, &[(uv(&[-1.0, -0.3]), 1.0), (uv(&[-0.3, -1.0]), 1.0)]).unwrap()
}

fn round_trip(truth: &CPolytope, p: f64, q: f64, config: &SolverConfig) -> CPolytope {
    let grid = make_grid(truth.cone(), config.resolution, config.seed).unwrap();
    let mu = pq_measure(truth, p, q, &grid).unwrap();
    let problem = Problem::new(truth.cone().clone(), mu, p, q).unwrap();
    let s = solve_on(&problem, config, &grid).unwrap();
    assert!(s.converged, "({p}, {q}): {:?}", s.warnings);
    s.polytope
}

#[test]
fn forward_then_inverse_recovers_the_support_numbers() {
    let truth = two_facets();
    let config = SolverConfig::default();
    for (p, q) in [(-1.0, 2.0), (-0.5, 1.0), (0.0, 2.0), (-2.0, 0.0), (0.5, 2.0)] {
        let got = round_trip(&truth, p, q, &config);
        for (a, b) in got.facets().iter().zip(truth.facets()) {
            assert!((a.h / b.h - 1.0).abs() < 1e-8, "({p}, {q}): {} vs {}", a.h, b.h);
        }
        assert!(hausdorff_truncated(&got, &truth, 4.0).unwrap() < 1e-7);
    }
}

#[test]
fn spatial_round_trip() {
    let c = Cone::orthant(3).unwrap();
    let truth = wulff_shape(&c, &[
        (uv(&[-1.0, -1.0, -1.0]), 1.0),
        (uv(&[-1.0, -0.3, -0.4]), 0.8),
        (uv(&[-0.2, -1.0, -0.5]), 0.75),
    ])
    .unwrap();
    let config = SolverConfig { resolution: 1024, ..SolverConfig::default() };
    let got = round_trip(&truth, -1.0, 3.0, &config);
    for (a, b) in got.facets().iter().zip(truth.facets()) {
        assert!((a.h / b.h - 1.0).abs() < 1e-7, "{} vs {}", a.h, b.h);
    }
}

#[test]
fn equal_exponents_give_a_dilate() {
    let truth = two_facets();
    let c = truth.cone().clone();
    let grid = make_grid(&c, 1024, 0).unwrap();
    let mu = pq_measure(&truth.dilate(1.7).unwrap(), 1.0, 1.0, &grid).unwrap();
    let s = solve_on(&Problem::new(c, mu, 1.0, 1.0).unwrap(), &SolverConfig::default(), &grid).unwrap();
    assert!(s.converged && s.up_to_dilation);
    let ratios: Vec<f64> = s.polytope.facets().iter().zip(truth.facets()).map(|(a, b)| a.h / b.h).collect();
    assert!((ratios[0] - ratios[1]).abs() < 1e-8 * ratios[0]);
}

#[test]
fn initial_scale_does_not_matter() {
    let truth = two_facets();
    let a = round_trip(&truth, -1.0, 2.0, &SolverConfig::default());
    let b = round_trip(&truth, -1.0, 2.0, &SolverConfig { initial_value: 37.0, ..SolverConfig::default() });
    for (x, y) in a.facets().iter().zip(b.facets()) {
        assert!((x.h - y.h).abs() < 1e-8 * x.h.abs());
    }
}

#[test]
fn seeds_do_not_change_deterministic_grids() {
    let truth = two_facets();
    let a = round_trip(&truth, 0.0, 1.0, &SolverConfig { seed: 1, ..SolverConfig::default() });
    let b = round_trip(&truth, 0.0, 1.0, &SolverConfig { seed: 2, ..SolverConfig::default() });
    assert_eq!(a.facets(), b.facets());
}

#[test]
fn discretized_solutions_stay_at_bounded_distance() {
    let c = Cone::orthant(2).unwrap();
    let density = |v: &[f64]| 1.0 + 0.5 * v[0] * v[1];
    let mut distances = Vec::new();
    for m in [4, 8, 16, 32] {
        let mu = discretize_density(density, &c, 0.05, m, 0).unwrap();
        let s = solve(&Problem::new(c.clone(), mu, -1.0, 2.0).unwrap(), &SolverConfig::default()).unwrap();
        assert!(s.converged);
        distances.push(s.b_distance);
    }
    let (lo, hi) = distances.iter().fold((f64::INFINITY, 0.0f64), |(a, b), d| (a.min(*d), b.max(*d)));
    assert!(lo > 0.0 && hi / lo < 1.5, "{distances:?}");
}

#[test]
fn steep_facet_round_trip() {
    // the second facet carries a small share of the measure
    let c = Cone::orthant(2).unwrap();
    let truth = wulff_shape(&c, &[(uv(&[-1.0, -1.0]), 1.0), (uv(&[-1.0, -0.05]), 0.72)]).unwrap();
    let got = round_trip(&truth, -1.0, 2.0, &SolverConfig::default());
    assert!((got.facets()[1].h / truth.facets()[1].h - 1.0).abs() < 1e-8);
}
