//! Circular Jacobi polynomials
//!
//!   g_n^γ(e^{iθ}) = (γ+1)_n/n! · ₂F₁(-n, γ/2+1; γ+1; 1-e^{iθ}),
//!
//! orthogonal on the unit circle against (sin θ/2)^γ.

use std::f64::consts::{LN_2, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadrature::{circle_rule, circle_rule_clustered, Domain, QuadratureRule};
use crate::specfun::{hyp2f1_terminating, ln_gamma, ComplexSum};

/// A point e^{iθ} on the unit circle, θ reduced to [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePoint {
    theta: f64,
}

impl CirclePoint {
    pub fn new(theta: f64) -> Self {
        let t = theta.rem_euclid(TAU);
        // rem_euclid can round up to exactly 2π
        CirclePoint {
            theta: if t >= TAU { 0.0 } else { t },
        }
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    /// e^{iθ}.
    pub fn unit(self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }

    /// 1 - e^{iθ} = 2 sin²(θ/2) - i sin θ, without cancellation near θ = 0.
    pub fn one_minus(self) -> Complex64 {
        let s = (0.5 * self.theta).sin();
        Complex64::new(2.0 * s * s, -self.theta.sin())
    }
}

/// (γ+1)_n / n! = Γ(n+γ+1)/(n! Γ(γ+1)), the squared norm of g_n under the
/// normalized weight. Evaluated as a product of ratios.
pub fn squared_norm(n: usize, gamma: f64) -> f64 {
    (0..n).map(|k| (gamma + 1.0 + k as f64) / (k as f64 + 1.0)).product()
}

/// g_n^γ(e^{iθ}) via the terminating hypergeometric sum.
pub fn circular_jacobi(n: usize, gamma: f64, p: CirclePoint) -> Complex64 {
    squared_norm(n, gamma) * hyp2f1_terminating(n, 0.5 * gamma + 1.0, gamma + 1.0, p.one_minus())
}

/// P_n = (c)_n/n! · ₂F₁(-n, a; c; 1-w) for n = 0..=n_max.
///
/// These are the Taylor coefficients of (1-wt)^{-a} (1-t)^{-(c-a)}, hence
///
///   (n+1) P_{n+1} = [(1+w)n + aw + c - a] P_n - w(n-1+c) P_{n-1}.
///
/// For |w| ≤ 1 both characteristic roots (1 and w) lie on or inside the
/// unit circle, so forward recursion only accumulates rounding linearly.
pub fn jacobi_sequence(n_max: usize, a: f64, c: f64, w: Complex64) -> Vec<Complex64> {
    let b = c - a;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(Complex64::new(1.0, 0.0));
    if n_max == 0 {
        return out;
    }
    out.push(w * a + b);
    for n in 1..n_max {
        let nf = n as f64;
        let next = ((w + 1.0) * nf + w * a + b) * out[n] - w * (nf - 1.0 + c) * out[n - 1];
        out.push(next / (nf + 1.0));
    }
    out
}

/// g_0^γ, …, g_{n_max}^γ at one point, by [`jacobi_sequence`].
pub fn circular_jacobi_sequence(n_max: usize, gamma: f64, p: CirclePoint) -> Vec<Complex64> {
    jacobi_sequence(n_max, 0.5 * gamma + 1.0, gamma + 1.0, p.unit())
}

/// 2^γ Γ²(γ/2+1)/Γ(γ+1).
pub fn weight_constant(gamma: f64) -> f64 {
    (gamma * LN_2 + 2.0 * ln_gamma(0.5 * gamma + 1.0) - ln_gamma(gamma + 1.0)).exp()
}

/// Ω_γ(θ) = 2^γ Γ²(γ/2+1)/Γ(γ+1) (sin θ/2)^γ / (2π), a probability density
/// on [0, 2π) with respect to dθ.
pub fn weight_density(gamma: f64, p: CirclePoint) -> f64 {
    weight_constant(gamma) * (0.5 * p.theta()).sin().abs().powf(gamma) / TAU
}

/// Hermitian matrix of overlaps ∫ conj(g_n) g_m Ω_γ dθ, 0 ≤ n, m ≤ n_max.
pub fn gram_matrix(n_max: usize, gamma: f64, rule: &QuadratureRule) -> Result<Vec<Vec<Complex64>>> {
    if rule.domain != Domain::Circle {
        return Err(Error::InvalidParam {
            name: "rule",
            msg: "Gram matrix needs a circle rule".into(),
        });
    }
    let uniform = rule.weights.windows(2).all(|w| w[0] == w[1]);
    if uniform && gamma < 1.0 && gamma != 0.0 {
        log::warn!(
            "periodic trapezoid with γ = {gamma}: the weight has a kink at θ = 0, expect slow convergence"
        );
    }
    let n = n_max + 1;
    let rows: Vec<(f64, Vec<Complex64>)> = rule
        .nodes
        .par_iter()
        .zip(&rule.weights)
        .map(|(&theta, &w)| {
            let p = CirclePoint::new(theta);
            let g = (0..n).map(|k| circular_jacobi(k, gamma, p)).collect();
            (w * weight_density(gamma, p), g)
        })
        .collect();
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, row) in gram.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate().skip(i) {
            let mut sum = ComplexSum::new();
            for (w, g) in &rows {
                sum.add(g[i].conj() * g[j] * *w);
            }
            *entry = sum.value();
        }
    }
    for i in 0..n {
        for j in 0..i {
            gram[i][j] = gram[j][i].conj();
        }
    }
    Ok(gram)
}

/// Gram matrix with node doubling: starts at the smallest power of two
/// ≥ 32(n_max+1) and doubles until successive matrices agree to `tol`
/// entrywise. The periodic trapezoid is used when γ is an even integer
/// (the integrand is then a trigonometric polynomial), the clustered
/// tanh-sinh rule otherwise. Returns the matrix and the node count.
pub fn gram_matrix_adaptive(
    n_max: usize,
    gamma: f64,
    tol: f64,
) -> Result<(Vec<Vec<Complex64>>, usize)> {
    const MAX_NODES: usize = 1 << 16;
    let even = gamma == (gamma / 2.0).round() * 2.0;
    let build = |nodes: usize| {
        if even {
            circle_rule(nodes)
        } else {
            circle_rule_clustered(nodes)
        }
    };
    let mut nodes = (32 * (n_max + 1)).next_power_of_two();
    let mut prev = gram_matrix(n_max, gamma, &build(nodes)?)?;
    loop {
        nodes *= 2;
        let next = gram_matrix(n_max, gamma, &build(nodes)?)?;
        let diff = prev
            .iter()
            .flatten()
            .zip(next.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if diff <= tol {
            return Ok((next, nodes));
        }
        if nodes >= MAX_NODES {
            return Err(Error::NonConvergence {
                func: "gram_matrix_adaptive",
                terms: nodes,
                tail: diff,
            });
        }
        prev = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn point_reduction() {
        assert!((CirclePoint::new(-0.5).theta() - (TAU - 0.5)).abs() < 1e-15);
        assert!((CirclePoint::new(7.0).theta() - (7.0 - TAU)).abs() < 1e-15);
        assert_eq!(CirclePoint::new(TAU).theta(), 0.0);
    }

    #[test]
    fn low_degrees() {
        for &gamma in &[0.0, 0.5, 1.5, 3.0] {
            for &theta in &[0.0, 0.7, PI, 4.0] {
                let p = CirclePoint::new(theta);
                assert_eq!(circular_jacobi(0, gamma, p), Complex64::new(1.0, 0.0));
                let want = p.unit() * (gamma / 2.0 + 1.0) + gamma / 2.0;
                assert!((circular_jacobi(1, gamma, p) - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn fourier_case() {
        for n in 0..30 {
            for &theta in &[0.1, 1.0, 2.5, 6.0] {
                let p = CirclePoint::new(theta);
                let want = Complex64::from_polar(1.0, n as f64 * theta);
                assert!((circular_jacobi(n, 0.0, p) - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn sequence_matches_direct_sums() {
        for &gamma in &[0.0, 0.5, 1.5, 3.0] {
            for &theta in &[0.05, 1.0, PI, 5.5] {
                let p = CirclePoint::new(theta);
                let seq = circular_jacobi_sequence(300, gamma, p);
                for n in [0usize, 1, 2, 10, 77, 300] {
                    let direct = circular_jacobi(n, gamma, p);
                    let scale = squared_norm(n, gamma);
                    assert!((seq[n] - direct).norm() <= 1e-12 * scale, "γ={gamma} θ={theta} n={n}");
                }
            }
        }
    }

    #[test]
    fn weight() {
        for &theta in &[0.0, 1.0, 3.0] {
            assert!((weight_density(0.0, CirclePoint::new(theta)) - 1.0 / TAU).abs() < 1e-16);
        }
        assert_eq!(weight_density(2.0, CirclePoint::new(0.0)), 0.0);
        let rule = circle_rule(64).unwrap();
        let mass = rule
            .integrate_real(|t| weight_density(2.0, CirclePoint::new(t)))
            .unwrap();
        assert!((mass - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gram_fourier_identity() {
        let g = gram_matrix(4, 0.0, &circle_rule(64).unwrap()).unwrap();
        for (i, row) in g.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((v - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn gram_even_gamma_diagonal() {
        let g = gram_matrix(8, 2.0, &circle_rule(128).unwrap()).unwrap();
        for (n, row) in g.iter().enumerate() {
            let want = ((n + 2) * (n + 1)) as f64 / 2.0;
            assert!((row[n].re - want).abs() < 1e-10 * want);
            for (m, v) in row.iter().enumerate() {
                assert_eq!(*v, g[m][n].conj());
            }
        }
    }
}
