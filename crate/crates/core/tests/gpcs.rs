use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use gpcs::cjacobi::{circular_jacobi, CirclePoint};
use gpcs::gpcs::*;
use gpcs::pho::ModelParams;
use gpcs::quadrature::half_line_rule;
use gpcs::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const GAMMAS: [f64; 4] = [0.0, 0.5, 1.5, 3.0];
const EPSILONS: [f64; 3] = [0.1, 0.5, 1.0];
const THETAS: [f64; 5] = [0.0, FRAC_PI_4, FRAC_PI_2, PI, 1.5 * PI];

#[test]
fn normalization_routes_agree_on_grid() {
    for &gamma in &GAMMAS {
        for &eps in &EPSILONS {
            for &theta in &THETAS {
                let s = normalization_series(gamma, eps, theta, 1e-15).unwrap().value.re;
                let c = normalization_closed(gamma, eps, theta).unwrap();
                assert!((s - c).abs() <= 1e-9 * c, "γ={gamma} ε={eps} θ={theta}: {s} vs {c}");
                if gamma == 0.0 {
                    let want = 1.0 / -(-eps).exp_m1();
                    assert!((c - want).abs() <= 1e-12 * want);
                }
            }
        }
    }
}

#[test]
fn normalization_listed_points() {
    let s = normalization_series(1.5, 0.3, PI / 3.0, 1e-15).unwrap().value.re;
    let c = normalization_closed(1.5, 0.3, PI / 3.0).unwrap();
    assert!((s - c).abs() <= 1e-9 * c);
    let s = normalization_series(3.0, 0.7, 2.1, 1e-15).unwrap().value.re;
    let c = normalization_closed(3.0, 0.7, 2.1).unwrap();
    assert!((s - c).abs() <= 1e-9 * c);
}

#[test]
fn normalization_small_epsilon() {
    // ρ close to 1 exercises the logarithmic connection formula
    for &gamma in &[0.5, 2.0] {
        let s = normalization_series(gamma, 2e-3, 2.0, 1e-14).unwrap().value.re;
        let c = normalization_closed(gamma, 2e-3, 2.0).unwrap();
        assert!((s - c).abs() <= 1e-9 * c, "γ={gamma}: {s} vs {c}");
    }
}

#[test]
fn coefficients_self_overlap() {
    let p = ModelParams::coupled(1.5, 0.5).unwrap();
    let cv = coefficients_auto(&p, 1.0, DEFAULT_TAIL).unwrap();
    let overlap = cv.inner(&cv);
    assert!((overlap.re - 1.0).abs() < 1e-10 && overlap.im.abs() < 1e-14);
    assert!(cv.truncation_tail <= DEFAULT_TAIL);
}

#[test]
fn coefficient_mass_monotone_within_tail() {
    let p = ModelParams::coupled(3.0, 0.1).unwrap();
    let cv = coefficients_auto(&p, 2.0, 1e-12).unwrap();
    let mut acc = 0.0;
    for c in &cv.coeffs {
        let next = acc + c.norm_sqr();
        assert!(next >= acc);
        acc = next;
    }
    assert!(acc <= 1.0 + 1e-13 && acc >= 1.0 - cv.truncation_tail - 1e-13, "{acc}");
}

#[test]
fn gamma_zero_coefficients_are_phase_coherent() {
    for &eps in &EPSILONS {
        for &theta in &THETAS {
            let p = ModelParams::from_alpha(2.5, eps).unwrap();
            let cv = coefficients(80, &p, theta, 1.0).unwrap();
            let rho = (-0.5 * eps).exp();
            for (n, c) in cv.coeffs.iter().enumerate() {
                let want = Complex64::from_polar((1.0 - rho * rho).sqrt() * rho.powi(n as i32), n as f64 * theta);
                assert!((c - want).norm() <= 1e-12, "ε={eps} θ={theta} n={n}");
            }
        }
    }
}

#[test]
fn coefficient_definition() {
    let p = ModelParams::coupled(2.5, 0.4).unwrap();
    let theta = 0.9;
    let cv = coefficients(40, &p, theta, 1.0).unwrap();
    let n_root = normalization_closed(2.5, 0.4, theta).unwrap().sqrt();
    for (n, c) in cv.coeffs.iter().enumerate() {
        let g = circular_jacobi(n, 2.5, CirclePoint::new(theta));
        let want = g / (sigma(n, 2.5, 0.4).sqrt() * n_root);
        assert!((c - want).norm() <= 1e-13 * (1.0 + want.norm()), "n={n}");
    }
}

fn x_grid() -> Vec<f64> {
    (0..60).map(|i| 0.1 + 5.9 * i as f64 / 59.0).collect()
}

/// max |closed - series| / max |closed| over x ∈ [0.1, 6]
fn wavefunction_route_error(gamma: f64, eps: f64, theta: f64) -> f64 {
    let p = ModelParams::coupled(gamma, eps).unwrap();
    let xs = x_grid();
    let closed = wavefunction_closed_grid(&p, theta, &xs).unwrap();
    let series = wavefunction_series_grid(&p, theta, &xs, 1e-13).unwrap();
    let sup = closed.iter().map(|z| z.norm()).fold(0.0, f64::max);
    closed
        .iter()
        .zip(&series)
        .map(|(c, s)| (c - s.value).norm())
        .fold(0.0, f64::max)
        / sup
}

#[test]
fn wavefunction_routes_agree_on_grid() {
    for &gamma in &GAMMAS {
        for &eps in &EPSILONS {
            for &theta in &THETAS {
                let err = wavefunction_route_error(gamma, eps, theta);
                assert!(err <= 1e-8, "γ={gamma} ε={eps} θ={theta}: {err:e}");
            }
        }
    }
}

#[test]
fn wavefunction_pointwise_where_not_tiny() {
    let p = ModelParams::coupled(1.5, 0.5).unwrap();
    for &x in &[0.3, 1.0, 2.5, 4.0] {
        let c = wavefunction_closed(&p, PI, x).unwrap();
        let s = wavefunction_series(&p, PI, x, 1e-14).unwrap().value;
        assert!((c - s).norm() <= 1e-10 * c.norm(), "x={x}");
    }
}

#[test]
fn state_norm_by_quadrature() {
    let rule = half_line_rule(1000, 1.5).unwrap();
    for &gamma in &GAMMAS {
        for &eps in &EPSILONS {
            for &theta in &[0.0, FRAC_PI_2, PI] {
                let p = ModelParams::coupled(gamma, eps).unwrap();
                let psi = wavefunction_closed_grid(&p, theta, &rule.nodes).unwrap();
                let norm = rule.integrate_samples(&psi.iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect::<Vec<_>>()).unwrap();
                assert!((norm.re - 1.0).abs() <= 1e-8, "γ={gamma} ε={eps} θ={theta}: {}", norm.re);
            }
        }
    }
    // series route for an uncoupled state
    let p = ModelParams::from_alpha(2.7, 0.5).unwrap().with_gamma(1.0).unwrap();
    let values: Vec<_> = wavefunction_series_grid(&p, 1.3, &rule.nodes, 1e-13)
        .unwrap()
        .iter()
        .map(|s| Complex64::new(s.value.norm_sqr(), 0.0))
        .collect();
    assert!((rule.integrate_samples(&values).unwrap().re - 1.0).abs() <= 1e-8);
}

#[test]
fn wavefunction_theta_zero_shape() {
    // θ = 0: ψ ∝ x^{γ+1/2} exp(-(x²/2) coth(ε/4))
    let (gamma, eps) = (1.5, 0.5);
    let p = ModelParams::coupled(gamma, eps).unwrap();
    let f = |x: f64| x.powf(gamma + 0.5) * (-0.5 * x * x / (0.25 * eps).tanh()).exp();
    let ratio = wavefunction_closed(&p, 0.0, 0.4).unwrap() / f(0.4);
    for &x in &[0.1, 0.2, 0.7, 1.0] {
        let r = wavefunction_closed(&p, 0.0, x).unwrap() / f(x);
        assert!((r - ratio).norm() <= 1e-12 * ratio.norm());
    }
    assert_eq!(wavefunction_closed(&p, 0.0, 0.0).unwrap(), Complex64::new(0.0, 0.0));
}

#[test]
fn closed_wavefunction_requires_coupling() {
    let p = ModelParams::from_alpha(2.7, 0.5).unwrap();
    assert!(wavefunction_closed(&p, 1.0, 1.0).is_err());
    let p = ModelParams::coupled(1.0, 5e-4).unwrap();
    assert!(wavefunction_closed(&p, 1.0, 1.0).is_err());
}

#[test]
fn measure_density_values() {
    for &eps in &EPSILONS {
        let want = 1.0 / (-(-eps).exp_m1() * 2.0 * PI);
        for &theta in &THETAS {
            let d = measure_density(0.0, eps, theta).unwrap();
            assert!((d - want).abs() <= 1e-12 * want);
        }
        assert_eq!(measure_density(1.5, eps, 0.0).unwrap(), 0.0);
    }
}

#[test]
fn bilinear_engine_random_points() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..60 {
        let gamma = rng.gen_range(0.0..4.0);
        let eps = rng.gen_range(0.05..2.0);
        let theta = rng.gen_range(0.0..2.0 * PI);
        let a = 0.5 * gamma + 1.0;
        let xi = 1.0 - Complex64::from_polar(1.0, theta);
        let r = f64::exp(-eps);
        let lhs = bilinear_2f1_sum(a, a, gamma + 1.0, r, xi, xi.conj(), 1e-14).unwrap();
        let rhs = bilinear_2f1_closed(a, a, gamma + 1.0, r, xi, xi.conj()).unwrap();
        let err = (lhs.value - rhs).norm() / rhs.norm();
        assert!(err <= 1e-9, "γ={gamma} ε={eps} θ={theta}: {err:e}");
    }
}

#[test]
fn laguerre_engine_random_points() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..60 {
        let gamma: f64 = rng.gen_range(0.0..4.0);
        let t = rng.gen_range(0.1..0.7);
        let theta = rng.gen_range(0.0..2.0 * PI);
        let u = rng.gen_range(0.0..5.0);
        let y = 1.0 - Complex64::from_polar(1.0, theta);
        let lhs = laguerre_2f1_sum(t, 0.5 * gamma + 1.0, gamma, y, u, 1e-14).unwrap();
        let rhs = laguerre_2f1_closed(t, 0.5 * gamma + 1.0, gamma, y, u).unwrap();
        let err = (lhs.value - rhs).norm() / rhs.norm();
        assert!(err <= 1e-9, "γ={gamma} t={t} θ={theta} u={u}: {err:e}");
    }
}

#[test]
fn truncation_error_carries_suggestion() {
    let p = ModelParams::coupled(0.5, 0.1).unwrap();
    match coefficients(10, &p, 1.0, 1e-12) {
        Err(gpcs::Error::Truncation { suggested, tail, .. }) => {
            assert!(tail > 1e-12);
            assert!(suggested > 10);
        }
        other => panic!("expected truncation error, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalization_at_least_one(gamma in 0.0..4.0f64, eps in 0.01..3.0f64, theta in 0.0..6.3f64) {
        let n = normalization_closed(gamma, eps, theta).unwrap();
        prop_assert!(n >= 1.0 - 1e-12);
    }

    #[test]
    fn normalization_even_in_theta(gamma in 0.0..4.0f64, eps in 0.01..3.0f64, theta in 0.0..6.3f64) {
        let a = normalization_closed(gamma, eps, theta).unwrap();
        let b = normalization_closed(gamma, eps, 2.0 * PI - theta).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn normalization_cross_route(gamma in 0.0..4.0f64, eps in 0.05..2.0f64, theta in 0.0..6.3f64) {
        let s = normalization_series(gamma, eps, theta, 1e-15).unwrap().value.re;
        let c = normalization_closed(gamma, eps, theta).unwrap();
        prop_assert!((s - c).abs() <= 1e-9 * c);
    }

    #[test]
    fn coefficient_vectors_are_unit(gamma in 0.0..4.0f64, eps in 0.1..2.0f64, theta in 0.0..6.3f64) {
        let p = ModelParams::coupled(gamma, eps).unwrap();
        let cv = coefficients_auto(&p, theta, 1e-12).unwrap();
        prop_assert!((cv.norm_sqr() - 1.0).abs() <= 1e-11);
    }
}
