//! Coherent-state transform
//!
//!   W_γ[φ](e^{iθ}) = lim_{ε→0⁺} ∫₀^∞ Ψ_ε(θ, x) conj(φ(x)) dx,
//!
//! with Ψ_ε(θ, ·) = √N_{γ,ε}(θ) ⟨·|e^{iθ}; ε, γ⟩ in the coupled regime
//! α = γ+1. Eigenstates map to normalized circular Jacobi polynomials:
//!
//!   W_γ[⟨·|n;γ+1⟩] = √(n!/(γ+1)_n) g_n^γ(e^{iθ}).

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cjacobi::squared_norm;
use crate::error::{Error, Result};
use crate::gpcs::{unnormalized_wavefunction, GridFunction};
use crate::identity::project;
use crate::pho::eigenfunction;
use crate::quadrature::{half_line_rule, Domain, QuadratureRule};
use crate::specfun::hyp2f1_terminating;

/// Smallest ε at which the defining integral is evaluated by quadrature.
pub const QUADRATURE_MIN_EPS: f64 = 0.05;
/// Default ε values for the extrapolation to ε = 0.
pub const DEFAULT_EPS_SCHEDULE: [f64; 4] = [0.4, 0.2, 0.1, 0.05];
/// Modes used by the projection fallback.
pub const PROJECTION_MODES: usize = 64;
/// Agreement required between the 3- and 4-point extrapolants before the
/// extrapolated values are trusted.
pub const EXTRAPOLATION_TOL: f64 = 1e-8;
/// θ-points sampled to choose between extrapolation and projection.
const PROBE_POINTS: usize = 16;

/// κ = (1-e^{iθ})τ / ((1-τ)(1-τe^{iθ})).
pub fn kappa(tau: f64, theta: f64) -> Complex64 {
    let s = (0.5 * theta).sin();
    let one_minus_tau = 1.0 - tau;
    let one_minus_w = Complex64::new(2.0 * s * s, -theta.sin());
    let denom = Complex64::new(one_minus_tau + 2.0 * tau * s * s, -tau * theta.sin());
    one_minus_w * tau / (denom * one_minus_tau)
}

/// κ(1-τ)²/(τ(1-κ(1-τ))), which equals 1 - e^{iθ}.
pub fn kappa_chord(tau: f64, theta: f64) -> Complex64 {
    let k = kappa(tau, theta) * (1.0 - tau);
    k * (1.0 - tau) / (tau * (1.0 - k))
}

/// (1-τ)^{γ/2+1} / ((1-τe^{iθ})(1-κ(1-τ)))^{1+γ/2}, which equals 1.
pub fn kappa_prefactor(tau: f64, theta: f64, gamma: f64) -> Complex64 {
    let p = 1.0 + 0.5 * gamma;
    let k = kappa(tau, theta) * (1.0 - tau);
    let base = (1.0 - Complex64::from_polar(tau, theta)) * (1.0 - k);
    (1.0 - tau).powf(p) / base.powf(p)
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParam {
            name: "gamma",
            msg: format!("must be non-negative, got {gamma}"),
        });
    }
    Ok(())
}

/// Q^{(ε)} = √N ⟨e^{iθ}; ε, γ|n; γ+1⟩
///        = e^{-nε/2} ((γ+1)_n/n!)^{1/2} ₂F₁(-n, 1+γ/2; 1+γ; 1-e^{iθ}).
/// ε = 0 gives the transform image directly.
pub fn q_epsilon_analytic(n: usize, gamma: f64, epsilon: f64, theta: f64) -> Result<Complex64> {
    check_gamma(gamma)?;
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParam {
            name: "epsilon",
            msg: format!("must be non-negative, got {epsilon}"),
        });
    }
    let z = 1.0 - Complex64::from_polar(1.0, theta);
    let f = hyp2f1_terminating(n, 0.5 * gamma + 1.0, gamma + 1.0, z);
    Ok(f * ((-0.5 * n as f64 * epsilon).exp() * squared_norm(n, gamma).sqrt()))
}

/// Half-line rule suited to the transform integrals for ε ≥
/// [`QUADRATURE_MIN_EPS`].
pub fn default_rule() -> QuadratureRule {
    half_line_rule(768, 1.0).expect("valid rule parameters")
}

fn check_quadrature_eps(epsilon: f64) -> Result<()> {
    if !(epsilon >= QUADRATURE_MIN_EPS && epsilon.is_finite()) {
        return Err(crate::error::domain(
            "transform quadrature",
            format!("needs ε ≥ {QUADRATURE_MIN_EPS}, got {epsilon}"),
        ));
    }
    Ok(())
}

/// ∫ Ψ_ε(θ, x) conj(φ(x)) dx over the nodes of `rule`, for φ given by its
/// samples there. Nodes where w·|φ| is below 1e-20 of its maximum are
/// skipped; Ψ_ε is Gaussian-bounded, so they cannot contribute.
fn defining_integral(gamma: f64, epsilon: f64, theta: f64, rule: &QuadratureRule, phi: &[Complex64]) -> Result<Complex64> {
    let peak = rule.weights.iter().zip(phi).map(|(w, p)| w * p.norm()).fold(0.0, f64::max);
    let samples = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .zip(phi)
        .map(|((&x, w), p)| {
            if w * p.norm() <= 1e-20 * peak {
                Ok(Complex64::new(0.0, 0.0))
            } else {
                Ok(unnormalized_wavefunction(gamma, epsilon, theta, x)? * p.conj())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    rule.integrate_samples(&samples)
}

/// Q^{(ε)} by quadrature of the defining integral with φ = ⟨·|n;γ+1⟩.
pub fn q_epsilon_quadrature(n: usize, gamma: f64, epsilon: f64, theta: f64, rule: &QuadratureRule) -> Result<Complex64> {
    check_gamma(gamma)?;
    check_quadrature_eps(epsilon)?;
    if rule.domain != Domain::HalfLine {
        return Err(Error::InvalidParam {
            name: "rule",
            msg: "expected a half-line rule".into(),
        });
    }
    let psi = rule
        .nodes
        .iter()
        .map(|&x| Ok(Complex64::new(eigenfunction(n, gamma + 1.0, x)?, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    defining_integral(gamma, epsilon, theta, rule, &psi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformRoute {
    Analytic,
    QuadratureExtrapolation,
    /// Fallback: projection onto the first [`PROJECTION_MODES`] eigenstates.
    Projection,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformResult {
    /// Eigenstate index for eigenstate images.
    pub n: Option<usize>,
    pub gamma: f64,
    pub theta_grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub route: TransformRoute,
    /// Largest disagreement between the 3- and 4-point extrapolants
    /// (zero for the analytic route).
    pub extrapolation_spread: f64,
}

/// √(n!/(γ+1)_n) g_n^γ(e^{iθ}) on the grid.
pub fn transform_eigenstate(n: usize, gamma: f64, theta_grid: &[f64]) -> Result<TransformResult> {
    let values = theta_grid
        .par_iter()
        .map(|&t| q_epsilon_analytic(n, gamma, 0.0, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(TransformResult {
        n: Some(n),
        gamma,
        theta_grid: theta_grid.to_vec(),
        values,
        route: TransformRoute::Analytic,
        extrapolation_spread: 0.0,
    })
}

/// Value at s = 1 of the polynomial through (s_k, y_k), by Neville's scheme.
fn neville_at_one(s: &[f64], y: &[Complex64]) -> Complex64 {
    let mut p = y.to_vec();
    for level in 1..s.len() {
        for i in 0..s.len() - level {
            let j = i + level;
            p[i] = (p[i] * (1.0 - s[j]) - p[i + 1] * (1.0 - s[i])) / (s[i] - s[j]);
        }
    }
    p[0]
}

/// W_γ[φ] on the θ-grid. The defining integral is evaluated by quadrature
/// (on the rule φ is sampled on) for each ε of the schedule and
/// extrapolated to ε = 0 as a polynomial in s = e^{-ε/2}: the integral is
/// Σ_n conj(⟨n|φ⟩) √(n!/(γ+1)_n) g_n sⁿ, so the extrapolation is exact on
/// the span of the first `schedule.len()` eigenstates.
///
/// If dropping the first ε changes the extrapolant by more than
/// [`EXTRAPOLATION_TOL`] (relative) on a sparse probe of the grid, the
/// result is computed instead by projecting φ onto [`PROJECTION_MODES`]
/// eigenstates and flagged as such.
pub fn transform_function(phi: &GridFunction, gamma: f64, theta_grid: &[f64], eps_schedule: &[f64]) -> Result<TransformResult> {
    check_gamma(gamma)?;
    if phi.domain() != Domain::HalfLine {
        return Err(Error::InvalidParam {
            name: "phi",
            msg: "expected samples on a half-line rule".into(),
        });
    }
    if eps_schedule.len() < 2 {
        return Err(Error::InvalidParam {
            name: "eps_schedule",
            msg: "need at least two ε values".into(),
        });
    }
    for &e in eps_schedule {
        check_quadrature_eps(e)?;
    }
    let s: Vec<f64> = eps_schedule.iter().map(|e| (-0.5 * e).exp()).collect();
    let rule = Arc::clone(&phi.rule);
    let extrapolate = |theta: f64| -> Result<(Complex64, f64)> {
        let y = eps_schedule
            .iter()
            .map(|&e| defining_integral(gamma, e, theta, &rule, &phi.values))
            .collect::<Result<Vec<_>>>()?;
        let full = neville_at_one(&s, &y);
        let reduced = neville_at_one(&s[1..], &y[1..]);
        Ok((full, (full - reduced).norm() / (1.0 + full.norm())))
    };
    // A sparse probe of the grid decides the route before the full pass.
    let stride = theta_grid.len().div_ceil(PROBE_POINTS).max(1);
    let probe = theta_grid
        .par_iter()
        .step_by(stride)
        .map(|&theta| extrapolate(theta))
        .collect::<Result<Vec<_>>>()?;
    let probe_spread = probe.iter().map(|p| p.1).fold(0.0, f64::max);
    let per_theta = if probe_spread <= EXTRAPOLATION_TOL {
        theta_grid.par_iter().map(|&theta| extrapolate(theta)).collect::<Result<Vec<_>>>()?
    } else {
        probe
    };
    let spread = per_theta.iter().map(|p| p.1).fold(0.0, f64::max);
    if spread <= EXTRAPOLATION_TOL {
        return Ok(TransformResult {
            n: None,
            gamma,
            theta_grid: theta_grid.to_vec(),
            values: per_theta.into_iter().map(|p| p.0).collect(),
            route: TransformRoute::QuadratureExtrapolation,
            extrapolation_spread: spread,
        });
    }
    log::warn!("ε-extrapolation unstable (spread {spread:.2e}); projecting onto {PROJECTION_MODES} eigenstates");
    let b = project(gamma + 1.0, phi, PROJECTION_MODES - 1)?;
    let values = theta_grid
        .par_iter()
        .map(|&theta| {
            b.iter()
                .enumerate()
                .map(|(n, bn)| Ok(bn.conj() * q_epsilon_analytic(n, gamma, 0.0, theta)?))
                .sum::<Result<Complex64>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TransformResult {
        n: None,
        gamma,
        theta_grid: theta_grid.to_vec(),
        values,
        route: TransformRoute::Projection,
        extrapolation_spread: spread,
    })
}

/// Equispaced grid θ_k = 2πk/n.
pub fn theta_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| std::f64::consts::TAU * k as f64 / n as f64).collect()
}
