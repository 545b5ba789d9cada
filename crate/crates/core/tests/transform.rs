use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use gpcs::cjacobi::{circular_jacobi, squared_norm, weight_density, CirclePoint};
use gpcs::gpcs::GridFunction;
use gpcs::pho::eigenfunction;
use gpcs::quadrature::{circle_rule_clustered, QuadratureRule};
use gpcs::transform::*;
use gpcs::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn eigenstate(rule: &Arc<QuadratureRule>, n: usize, gamma: f64) -> GridFunction {
    GridFunction::sample(Arc::clone(rule), |x| Complex64::new(eigenfunction(n, gamma + 1.0, x).unwrap(), 0.0)).unwrap()
}

#[test]
fn kappa_identities_random() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..100 {
        let tau = rng.gen_range(0.05..0.99);
        let theta = rng.gen_range(0.0..2.0 * PI);
        let gamma = rng.gen_range(0.0..4.0);
        let chord = 1.0 - Complex64::from_polar(1.0, theta);
        assert!((kappa_chord(tau, theta) - chord).norm() <= 1e-12);
        assert!((kappa_prefactor(tau, theta, gamma) - 1.0).norm() <= 1e-12);
    }
}

#[test]
fn quadrature_matches_analytic_on_grid() {
    let rule = default_rule();
    for n in 0..=8 {
        for &gamma in &[0.5, 1.5, 3.0] {
            for &eps in &[0.1, 0.5] {
                for &theta in &[0.5, FRAC_PI_2, PI, 5.0] {
                    let q = q_epsilon_quadrature(n, gamma, eps, theta, &rule).unwrap();
                    let a = q_epsilon_analytic(n, gamma, eps, theta).unwrap();
                    assert!((q - a).norm() <= 1e-8 * (1.0 + a.norm()), "n={n} γ={gamma} ε={eps} θ={theta}");
                }
            }
        }
    }
}

#[test]
fn quadrature_listed_points() {
    let rule = default_rule();
    let q = q_epsilon_quadrature(0, 1.0, 0.3, FRAC_PI_2, &rule).unwrap();
    assert!((q - q_epsilon_analytic(0, 1.0, 0.3, FRAC_PI_2).unwrap()).norm() <= 1e-8);
    let q = q_epsilon_quadrature(4, 2.5, 0.5, 1.0, &rule).unwrap();
    assert!((q - q_epsilon_analytic(4, 2.5, 0.5, 1.0).unwrap()).norm() <= 1e-8);
    // θ = 0: e^{-nε/2} ((γ+1)_n/n!)^{1/2}
    let q = q_epsilon_quadrature(3, 1.5, 0.4, 0.0, &rule).unwrap();
    let want = (-0.6f64).exp() * squared_norm(3, 1.5).sqrt();
    assert!((q - want).norm() <= 1e-8 * want);
}

#[test]
fn quadrature_refuses_small_epsilon() {
    assert!(q_epsilon_quadrature(1, 1.0, 0.01, 1.0, &default_rule()).is_err());
}

#[test]
fn eigenstate_images_are_normalized_jacobi() {
    let grid = theta_grid(256);
    for n in 0..=12 {
        for &gamma in &[0.0, 0.5, 1.5, 3.0] {
            let r = transform_eigenstate(n, gamma, &grid).unwrap();
            assert_eq!(r.route, TransformRoute::Analytic);
            for (v, &t) in r.values.iter().zip(&grid) {
                let g = circular_jacobi(n, gamma, CirclePoint::new(t));
                assert!((v * squared_norm(n, gamma).sqrt() - g).norm() <= 1e-12 * (1.0 + g.norm()));
                if gamma == 0.0 {
                    assert!((v - Complex64::from_polar(1.0, n as f64 * t)).norm() <= 1e-12);
                }
            }
        }
    }
}

#[test]
fn eigenstate_images_have_unit_norm() {
    let circle = circle_rule_clustered(1024).unwrap();
    for &gamma in &[0.0, 0.5, 1.5, 3.0] {
        for n in 0..=8 {
            let r = transform_eigenstate(n, gamma, &circle.nodes).unwrap();
            let norm: f64 = r
                .values
                .iter()
                .zip(&circle.nodes)
                .zip(&circle.weights)
                .map(|((v, &t), w)| w * v.norm_sqr() * weight_density(gamma, CirclePoint::new(t)))
                .sum();
            assert!((norm - 1.0).abs() <= 1e-9, "γ={gamma} n={n}: {norm}");
        }
    }
}

#[test]
fn transform_of_low_eigenstates_by_extrapolation() {
    let rule = Arc::new(default_rule());
    let grid = theta_grid(64);
    for n in 0..=2 {
        let gamma = 1.5;
        let r = transform_function(&eigenstate(&rule, n, gamma), gamma, &grid, &DEFAULT_EPS_SCHEDULE).unwrap();
        assert_eq!(r.route, TransformRoute::QuadratureExtrapolation);
        let want = transform_eigenstate(n, gamma, &grid).unwrap();
        for (a, b) in r.values.iter().zip(&want.values) {
            assert!((a - b).norm() <= 1e-10, "n={n}");
        }
    }
}

#[test]
fn transform_is_linear_and_kills_zero() {
    let rule = Arc::new(default_rule());
    let grid = theta_grid(32);
    let gamma = 0.5;
    let p0 = eigenstate(&rule, 0, gamma);
    let p1 = eigenstate(&rule, 1, gamma);
    let sum = GridFunction::new(Arc::clone(&rule), p0.values.iter().zip(&p1.values).map(|(a, b)| a + b).collect()).unwrap();
    let r = transform_function(&sum, gamma, &grid, &DEFAULT_EPS_SCHEDULE).unwrap();
    let i0 = transform_eigenstate(0, gamma, &grid).unwrap();
    let i1 = transform_eigenstate(1, gamma, &grid).unwrap();
    for ((v, a), b) in r.values.iter().zip(&i0.values).zip(&i1.values) {
        assert!((v - a - b).norm() <= 1e-10);
    }
    let zero = transform_function(&GridFunction::zeros(Arc::clone(&rule)), gamma, &grid, &DEFAULT_EPS_SCHEDULE).unwrap();
    assert!(zero.values.iter().all(|v| v.norm() == 0.0));
}

#[test]
fn higher_modes_fall_back_to_projection() {
    let rule = Arc::new(default_rule());
    let grid = theta_grid(32);
    let gamma = 1.5;
    let r = transform_function(&eigenstate(&rule, 5, gamma), gamma, &grid, &DEFAULT_EPS_SCHEDULE).unwrap();
    assert_eq!(r.route, TransformRoute::Projection);
    assert!(r.extrapolation_spread > EXTRAPOLATION_TOL);
    let want = transform_eigenstate(5, gamma, &grid).unwrap();
    for (a, b) in r.values.iter().zip(&want.values) {
        assert!((a - b).norm() <= 1e-10);
    }
}

#[test]
fn complex_input_is_conjugated() {
    // W[iψ_1] = -i W[ψ_1]
    let rule = Arc::new(default_rule());
    let grid = theta_grid(16);
    let phi = eigenstate(&rule, 1, 1.0);
    let iphi = GridFunction::new(Arc::clone(&rule), phi.values.iter().map(|v| v * Complex64::i()).collect()).unwrap();
    let a = transform_function(&iphi, 1.0, &grid, &DEFAULT_EPS_SCHEDULE).unwrap();
    let b = transform_eigenstate(1, 1.0, &grid).unwrap();
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((x + Complex64::i() * y).norm() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn epsilon_decay_law(n in 0usize..20, gamma in 0.0..4.0f64, eps in 0.0..3.0f64, theta in 0.0..6.3f64) {
        let a = q_epsilon_analytic(n, gamma, eps, theta).unwrap();
        let b = q_epsilon_analytic(n, gamma, 0.0, theta).unwrap() * (-0.5 * n as f64 * eps).exp();
        prop_assert!((a - b).norm() <= 1e-13 * (1.0 + b.norm()));
    }

    #[test]
    fn gamma_zero_images(n in 0usize..30, eps in 0.0..2.0f64, theta in 0.0..6.3f64) {
        let a = q_epsilon_analytic(n, 0.0, eps, theta).unwrap();
        let want = Complex64::from_polar((-0.5 * n as f64 * eps).exp(), n as f64 * theta);
        prop_assert!((a - want).norm() <= 1e-12);
    }
}
