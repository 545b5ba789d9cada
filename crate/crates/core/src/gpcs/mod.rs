//! Generalized phase coherent states
//!
//!   |e^{iθ}; ε, γ, α⟩ = N_{γ,ε}(θ)^{-1/2} Σ_n g_n^γ(e^{iθ}) / √σ_{γ,ε}(n) |n;α⟩,
//!   σ_{γ,ε}(n) = (γ+1)_n/n! · e^{nε},
//!
//! their normalization, expansion coefficients and wavefunctions.

mod generating;

pub use generating::{
    bilinear_2f1_closed, bilinear_2f1_sum, laguerre_2f1_closed, laguerre_2f1_sum,
};

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cjacobi::{circular_jacobi_sequence, weight_density, CirclePoint};
use crate::error::{domain, Error, Result};
use crate::pho::{eigenfunctions, ModelParams};
use crate::quadrature::{Domain, QuadratureRule};
use crate::specfun::hypergeometric::hyp2f1_with_complement;
use crate::specfun::{hyp1f1_scaled, ln_gamma, log_pochhammer, KahanSum, SeriesResult};
use crate::transform::kappa;

/// Smallest ε accepted by the closed-form routes.
pub const CLOSED_FORM_MIN_EPS: f64 = 1e-3;
/// Below this ε the series routes still run but log a warning.
pub const SERIES_MIN_EPS: f64 = 1e-4;
/// Default bound on the discarded coefficient mass Σ_{n>n_max} |c_n|².
pub const DEFAULT_TAIL: f64 = 1e-12;

const MAX_SERIES_TERMS: usize = 5_000_000;

fn check_gamma_eps(gamma: f64, epsilon: f64) -> Result<()> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParam {
            name: "gamma",
            msg: format!("must be non-negative, got {gamma}"),
        });
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParam {
            name: "epsilon",
            msg: format!("must be positive, got {epsilon}"),
        });
    }
    if epsilon < SERIES_MIN_EPS {
        log::warn!("ε = {epsilon} is below {SERIES_MIN_EPS}; series need ~{:.0} terms", 30.0 / epsilon);
    }
    Ok(())
}

fn check_closed_eps(func: &'static str, epsilon: f64) -> Result<()> {
    if epsilon < CLOSED_FORM_MIN_EPS {
        return Err(domain(
            func,
            format!("closed form needs ε ≥ {CLOSED_FORM_MIN_EPS}, got {epsilon}"),
        ));
    }
    Ok(())
}

/// ln σ_{γ,ε}(n).
pub fn ln_sigma(n: usize, gamma: f64, epsilon: f64) -> f64 {
    log_pochhammer(gamma + 1.0, n) - ln_gamma(n as f64 + 1.0) + n as f64 * epsilon
}

/// σ_{γ,ε}(n) = (γ+1)_n/n! · e^{nε}; may overflow to ∞, see [`ln_sigma`].
pub fn sigma(n: usize, gamma: f64, epsilon: f64) -> f64 {
    ln_sigma(n, gamma, epsilon).exp()
}

/// b_n = e^{-nε} (γ+1)_n/n! bounds e^{-nε} |g_n|² n!/(γ+1)_n, since
/// |g_n^γ(e^{iθ})| ≤ g_n^γ(1) = (γ+1)_n/n!. Returns an upper bound on
/// Σ_{m ≥ start} b_m^p for p ∈ (0, 1].
///
/// The ratio b_{m+1}/b_m = e^{-ε}(γ+1+m)/(m+1) decreases in m, so once it
/// drops below one the remainder is bounded geometrically.
fn coefficient_mass_tail(start: usize, gamma: f64, epsilon: f64, p: f64) -> f64 {
    let ratio = |m: f64| ((-epsilon).exp() * (gamma + 1.0 + m) / (m + 1.0)).powf(p);
    let mut ln_b = p * (log_pochhammer(gamma + 1.0, start) - ln_gamma(start as f64 + 1.0) - start as f64 * epsilon);
    let mut sum = 0.0;
    let mut m = start;
    loop {
        let q = ratio(m as f64);
        if q < 1.0 {
            return sum + ln_b.exp() / (1.0 - q);
        }
        sum += ln_b.exp();
        ln_b += q.ln();
        m += 1;
    }
}

/// Smallest n_max with Σ_{n>n_max} b_n^p ≤ tail.
fn n_max_for(gamma: f64, epsilon: f64, tail: f64, p: f64) -> usize {
    // walk to the region where the geometric bound applies, then bisect
    let mut hi = 1usize;
    while coefficient_mass_tail(hi + 1, gamma, epsilon, p) > tail {
        hi *= 2;
        if hi > MAX_SERIES_TERMS {
            return hi;
        }
    }
    let mut lo = 0usize;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if coefficient_mass_tail(mid + 1, gamma, epsilon, p) <= tail {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Truncation order for which the discarded coefficient mass
/// Σ_{n>n_max} |c_n|² is at most `tail` for every θ.
pub fn auto_n_max(gamma: f64, epsilon: f64, tail: f64) -> usize {
    n_max_for(gamma, epsilon, tail, 1.0)
}

/// N_{γ,ε}(θ) = Σ_n n! e^{-nε}/(γ+1)_n |g_n^γ(e^{iθ})|², summed until the
/// a-priori tail bound drops below `tol` relative to the partial sum.
pub fn normalization_series(gamma: f64, epsilon: f64, theta: f64, tol: f64) -> Result<SeriesResult> {
    check_gamma_eps(gamma, epsilon)?;
    let w = CirclePoint::new(theta).unit();
    let (a, b) = (0.5 * gamma + 1.0, 0.5 * gamma);
    let decay = (-epsilon).exp();
    let mut prev = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1.0, 0.0);
    let mut norm_sq = 1.0; // (γ+1)_n / n!
    let mut damp = 1.0; // e^{-nε}
    let mut sum = KahanSum::new();
    for n in 0..MAX_SERIES_TERMS {
        let nf = n as f64;
        sum.add(damp * cur.norm_sqr() / norm_sq);
        let q = decay * (gamma + nf + 2.0) / (nf + 2.0);
        let next_bound = damp * decay * norm_sq * (gamma + 1.0 + nf) / (nf + 1.0);
        if q < 1.0 {
            let tail = next_bound / (1.0 - q);
            if tail <= tol * sum.value() {
                return Ok(SeriesResult::real(sum.value(), n + 1, tail));
            }
        }
        // g_{n+1} from the three-term recurrence of the circular Jacobi polynomials
        let next = if n == 0 {
            w * a + b
        } else {
            (((w + 1.0) * nf + w * a + b) * cur - w * (nf + gamma) * prev) / (nf + 1.0)
        };
        prev = cur;
        cur = next;
        norm_sq *= (gamma + 1.0 + nf) / (nf + 1.0);
        damp = (-(nf + 1.0) * epsilon).exp();
    }
    Err(Error::NonConvergence {
        func: "normalization_series",
        terms: MAX_SERIES_TERMS,
        tail: f64::NAN,
    })
}

/// N_{γ,ε}(θ) = (1-e^{-ε}) / |1-e^{-ε+iθ}|^{2+γ} · ₂F₁(γ/2+1, γ/2+1; γ+1; ρ),
/// ρ = e^{-ε}|1-e^{iθ}|² / |1-e^{-ε+iθ}|².
///
/// 1 - ρ = (1-e^{-ε})²/|1-e^{-ε+iθ}|² is passed to ₂F₁ separately so ρ → 1
/// (small ε, θ away from 0) keeps full relative accuracy.
pub fn normalization_closed(gamma: f64, epsilon: f64, theta: f64) -> Result<f64> {
    check_gamma_eps(gamma, epsilon)?;
    check_closed_eps("normalization_closed", epsilon)?;
    let r = (-epsilon).exp();
    let one_minus_r = -(-epsilon).exp_m1();
    let s = (0.5 * theta).sin();
    let dist_sq = one_minus_r * one_minus_r + 4.0 * r * s * s;
    let rho = 4.0 * r * s * s / dist_sq;
    let one_minus_rho = one_minus_r * one_minus_r / dist_sq;
    debug_assert!((0.0..1.0).contains(&rho));
    let a = 0.5 * gamma + 1.0;
    let f = hyp2f1_with_complement(a, a, gamma + 1.0, rho, one_minus_rho)?;
    Ok(one_minus_r / dist_sq.powf(1.0 + 0.5 * gamma) * f.value.re)
}

/// Closed form when ε allows it, the series otherwise.
pub fn normalization(gamma: f64, epsilon: f64, theta: f64) -> Result<f64> {
    if epsilon >= CLOSED_FORM_MIN_EPS {
        normalization_closed(gamma, epsilon, theta)
    } else {
        normalization_series(gamma, epsilon, theta, 1e-15).map(|r| r.value.re)
    }
}

/// Truncated expansion c_0..c_{n_max} of a coherent state in the
/// eigenbasis |n;α⟩.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientVector {
    pub params: ModelParams,
    pub theta: f64,
    pub coeffs: Vec<Complex64>,
    /// Upper bound on Σ_{n>n_max} |c_n|².
    pub truncation_tail: f64,
    pub normalization: f64,
}

impl CoefficientVector {
    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Σ_{n≤n_max} |c_n|².
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect::<KahanSum>().value()
    }

    /// ⟨self|other⟩ over the common truncation.
    pub fn inner(&self, other: &CoefficientVector) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// c_n = N^{-1/2} g_n^γ(e^{iθ}) / √σ_{γ,ε}(n) for n ≤ n_max. Fails with
/// [`Error::Truncation`] (carrying a suggested order) when the discarded
/// mass bound exceeds `max_tail`.
pub fn coefficients(n_max: usize, params: &ModelParams, theta: f64, max_tail: f64) -> Result<CoefficientVector> {
    let (gamma, epsilon) = (params.gamma, params.epsilon);
    check_gamma_eps(gamma, epsilon)?;
    let normalization = normalization(gamma, epsilon, theta)?;
    let tail = coefficient_mass_tail(n_max + 1, gamma, epsilon, 1.0) / normalization;
    if tail > max_tail {
        return Err(Error::Truncation {
            n_max,
            tail,
            suggested: auto_n_max(gamma, epsilon, max_tail),
        });
    }
    let g = circular_jacobi_sequence(n_max, gamma, CirclePoint::new(theta));
    let inv_sqrt_n = normalization.sqrt().recip();
    let mut norm_sq: f64 = 1.0;
    let coeffs = g
        .iter()
        .enumerate()
        .map(|(n, &gn)| {
            let c = gn * ((-0.5 * n as f64 * epsilon).exp() / norm_sq.sqrt() * inv_sqrt_n);
            norm_sq *= (gamma + 1.0 + n as f64) / (n as f64 + 1.0);
            c
        })
        .collect();
    Ok(CoefficientVector {
        params: *params,
        theta,
        coeffs,
        truncation_tail: tail,
        normalization,
    })
}

/// [`coefficients`] with the smallest n_max meeting `max_tail`.
pub fn coefficients_auto(params: &ModelParams, theta: f64, max_tail: f64) -> Result<CoefficientVector> {
    check_gamma_eps(params.gamma, params.epsilon)?;
    let n_max = auto_n_max(params.gamma, params.epsilon, max_tail);
    coefficients(n_max, params, theta, max_tail)
}

/// Truncation order for pointwise wavefunction sums: Σ_{n>n_max} |c_n| ≤ tol,
/// which bounds the pointwise tail because |⟨x|n;α⟩| ≤ 1 in practice for
/// the orders involved.
fn wavefunction_n_max(gamma: f64, epsilon: f64, tol: f64) -> usize {
    n_max_for(gamma, epsilon, tol, 0.5)
}

/// ⟨x|e^{iθ}; ε, γ, α⟩ = Σ_n c_n ⟨x|n;α⟩ at the points `xs`, with terms
/// kept until the estimated pointwise tail is below `tol`. Works for any
/// (γ, α); x = 0 gives 0.
pub fn wavefunction_series_grid(
    params: &ModelParams,
    theta: f64,
    xs: &[f64],
    tol: f64,
) -> Result<Vec<SeriesResult>> {
    let (gamma, epsilon) = (params.gamma, params.epsilon);
    check_gamma_eps(gamma, epsilon)?;
    let n_max = wavefunction_n_max(gamma, epsilon, tol);
    let cv = coefficients(n_max, params, theta, f64::INFINITY)?;
    let tail = coefficient_mass_tail(n_max + 1, gamma, epsilon, 0.5) / cv.normalization.sqrt();
    let cv = Arc::new(cv);
    xs.par_iter()
        .map(|&x| {
            let basis = eigenfunctions(n_max, params.alpha, x)?;
            let mut re = KahanSum::new();
            let mut im = KahanSum::new();
            for (c, b) in cv.coeffs.iter().zip(&basis) {
                re.add(c.re * b);
                im.add(c.im * b);
            }
            Ok(SeriesResult {
                value: Complex64::new(re.value(), im.value()),
                terms_used: n_max + 1,
                tail_bound: tail,
            })
        })
        .collect()
}

/// Single-point [`wavefunction_series_grid`].
pub fn wavefunction_series(params: &ModelParams, theta: f64, x: f64, tol: f64) -> Result<SeriesResult> {
    Ok(wavefunction_series_grid(params, theta, &[x], tol)?[0])
}

/// √N_{γ,ε}(θ) ⟨x|e^{iθ}; ε, γ⟩ in the coupled regime α = γ+1:
///
///   √2 x^{γ+1/2} (1-τ)^{-γ/2} (1-τe^{iθ})^{-1-γ/2} / √Γ(γ+1)
///   · exp(-(x²/2) coth(ε/4)) · ₁F₁(1+γ/2; 1+γ; κx²),
///
/// τ = e^{-ε/2}, κ = (1-e^{iθ})τ/((1-τ)(1-τe^{iθ})). Evaluated in log
/// space after Kummer's transformation, which cancels the exponential
/// growth of ₁F₁ against the Gaussian analytically.
///
/// Branch: Re(1-τe^{iθ}) = 1 - τcos θ > 0 for τ < 1, so the principal
/// power of 1-τe^{iθ} is continuous in θ.
pub fn unnormalized_wavefunction(gamma: f64, epsilon: f64, theta: f64, x: f64) -> Result<Complex64> {
    check_gamma_eps(gamma, epsilon)?;
    check_closed_eps("wavefunction_closed", epsilon)?;
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::InvalidParam {
            name: "x",
            msg: format!("must be a non-negative finite number, got {x}"),
        });
    }
    if x == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let tau = (-0.5 * epsilon).exp();
    let one_minus_tau = -(-0.5 * epsilon).exp_m1();
    let s = (0.5 * theta).sin();
    let denom = Complex64::new(one_minus_tau + 2.0 * tau * s * s, -tau * theta.sin());
    let y = x * x;
    // Kummer's transformation moves e^{κy} into the Gaussian, where
    // κ - (1+τ)/(2(1-τ)) = -(1+τe^{iθ})/(2(1-τe^{iθ})) carries no 1/(1-τ).
    let f = hyp1f1_scaled(0.5 * gamma, gamma + 1.0, -kappa(tau, theta) * y)?;
    let gauss = -0.5 * y * (2.0 - denom) / denom;
    let log_real = 0.5 * std::f64::consts::LN_2 + (gamma + 0.5) * x.ln()
        - 0.5 * gamma * one_minus_tau.ln()
        - 0.5 * ln_gamma(gamma + 1.0)
        + gauss.re
        + f.log_scale;
    let phase = (Complex64::new(0.0, gauss.im) - (1.0 + 0.5 * gamma) * denom.ln()).exp() * f.mantissa;
    Ok(phase * log_real.exp())
}

fn require_coupled(params: &ModelParams) -> Result<()> {
    if !params.coupled {
        return Err(Error::InvalidParam {
            name: "params",
            msg: "the closed-form wavefunction needs coupled parameters (α = γ+1)".into(),
        });
    }
    Ok(())
}

/// Closed-form ⟨x|e^{iθ}; ε, γ⟩ at the points `xs` (coupled parameters,
/// ε ≥ [`CLOSED_FORM_MIN_EPS`]).
pub fn wavefunction_closed_grid(params: &ModelParams, theta: f64, xs: &[f64]) -> Result<Vec<Complex64>> {
    require_coupled(params)?;
    let scale = normalization_closed(params.gamma, params.epsilon, theta)?.sqrt().recip();
    xs.par_iter()
        .map(|&x| Ok(unnormalized_wavefunction(params.gamma, params.epsilon, theta, x)? * scale))
        .collect()
}

/// Single-point [`wavefunction_closed_grid`].
pub fn wavefunction_closed(params: &ModelParams, theta: f64, x: f64) -> Result<Complex64> {
    Ok(wavefunction_closed_grid(params, theta, &[x])?[0])
}

/// Density of dμ_{γ,ε} with respect to dθ: Ω_γ(θ) N_{γ,ε}(θ).
pub fn measure_density(gamma: f64, epsilon: f64, theta: f64) -> Result<f64> {
    Ok(weight_density(gamma, CirclePoint::new(theta)) * normalization_closed(gamma, epsilon, theta)?)
}

/// Samples of a function on the nodes of a quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub rule: Arc<QuadratureRule>,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(rule: Arc<QuadratureRule>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != rule.len() {
            return Err(Error::InvalidParam {
                name: "values",
                msg: format!("{} samples for a {}-node rule", values.len(), rule.len()),
            });
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite {
                index: i,
                x: rule.nodes[i],
            });
        }
        Ok(GridFunction { rule, values })
    }

    /// Samples `f` at the rule's nodes (in parallel).
    pub fn sample<F>(rule: Arc<QuadratureRule>, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Sync,
    {
        let values = rule.nodes.par_iter().map(|&x| f(x)).collect();
        GridFunction::new(rule, values)
    }

    pub fn zeros(rule: Arc<QuadratureRule>) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); rule.len()];
        GridFunction { rule, values }
    }

    pub fn domain(&self) -> Domain {
        self.rule.domain
    }

    pub fn nodes(&self) -> &[f64] {
        &self.rule.nodes
    }

    /// ∫ conj(self) · other.
    pub fn inner(&self, other: &GridFunction) -> Result<Complex64> {
        let prod: Vec<Complex64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .collect();
        self.rule.integrate_samples(&prod)
    }

    /// Quadrature L² norm.
    pub fn norm(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.rule.weights)
            .map(|(v, w)| w * v.norm_sqr())
            .collect::<KahanSum>()
            .value()
            .sqrt()
    }

    /// max |f| over the nodes in [lo, hi].
    pub fn sup_norm_on(&self, lo: f64, hi: f64) -> f64 {
        self.nodes()
            .iter()
            .zip(&self.values)
            .filter(|(x, _)| (lo..=hi).contains(*x))
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &GridFunction) -> GridFunction {
        GridFunction {
            rule: Arc::clone(&self.rule),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        }
    }
}
