use std::f64::consts::PI;

use gpcs::cjacobi::*;
use gpcs::quadrature::{circle_rule, circle_rule_clustered};
use gpcs::specfun::ln_gamma;
use gpcs::Complex64;
use proptest::prelude::*;

fn expected_diagonal(n: usize, gamma: f64) -> f64 {
    // Γ(n+γ+1) / (n! Γ(γ+1))
    (ln_gamma(n as f64 + gamma + 1.0) - ln_gamma(n as f64 + 1.0) - ln_gamma(gamma + 1.0)).exp()
}

fn check_gram(g: &[Vec<Complex64>], gamma: f64, tol: f64) {
    for (n, row) in g.iter().enumerate() {
        let want = expected_diagonal(n, gamma);
        assert!((row[n].re - want).abs() <= tol * want, "γ={gamma} diag {n}: {} vs {want}", row[n]);
        assert!(row[n].im.abs() <= tol * want);
        for (m, v) in row.iter().enumerate() {
            if m != n {
                assert!(v.norm() <= tol, "γ={gamma} ({n},{m}) = {v}");
            }
        }
    }
}

#[test]
fn gram_512_nodes() {
    for &gamma in &[0.0, 0.5, 1.5, 3.0] {
        let rule = circle_rule_clustered(512).unwrap();
        let g = gram_matrix(15, gamma, &rule).unwrap();
        check_gram(&g, gamma, 1e-10);
    }
    for &gamma in &[0.0, 2.0, 4.0] {
        let g = gram_matrix(15, gamma, &circle_rule(512).unwrap()).unwrap();
        check_gram(&g, gamma, 1e-10);
    }
}

#[test]
fn gram_adaptive() {
    for &gamma in &[0.0, 0.5, 1.5, 3.0] {
        let (g, nodes) = gram_matrix_adaptive(15, gamma, 1e-12).unwrap();
        assert!(nodes >= 512);
        check_gram(&g, gamma, 1e-10);
    }
}

#[test]
fn reflected_sum_against_oracle_for_high_degree() {
    for &gamma in &[0.5, 3.0] {
        for &theta in &[0.3, 2.0, PI] {
            let p = CirclePoint::new(theta);
            for n in [40usize, 120] {
                let got = circular_jacobi(n, gamma, p);
                let z = p.one_minus();
                let want = gpcs_testsupport::hyp2f1_terminating(n, gamma / 2.0 + 1.0, gamma + 1.0, z)
                    * squared_norm(n, gamma);
                assert!((got - want).norm() <= 1e-12 * want.norm().max(1.0));
            }
        }
    }
}

proptest! {
    #[test]
    fn unimodular_at_gamma_zero(n in 0usize..200, theta in 0.0f64..6.3) {
        let v = circular_jacobi(n, 0.0, CirclePoint::new(theta));
        prop_assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conjugation_symmetry(n in 0usize..60, gamma in 0.0f64..5.0, theta in 0.0f64..6.3) {
        let a = circular_jacobi(n, gamma, CirclePoint::new(theta)).conj();
        let b = circular_jacobi(n, gamma, CirclePoint::new(-theta));
        prop_assert!((a - b).norm() <= 1e-12 * squared_norm(n, gamma));
    }
}
