//! The damped resolution of the identity
//!
//!   O_ε = ∫ |e^{iθ}; ε, γ, α⟩⟨e^{iθ}; ε, γ, α| dμ_{γ,ε}(θ) = Σ_m e^{-mε} |m;α⟩⟨α;m|,
//!
//! applied either through its integral kernel
//!
//!   G_ε^α(u,v) = 2(uv)^{α-1/2} e^{-(u²+v²)/2} K(e^{-ε}; u², v²)
//!
//! or through the eigenbasis, plus diagnostics for the limit ε → 0⁺.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::gpcs::{coefficients, measure_density, GridFunction};
use crate::pho::{eigenfunctions, ModelParams};
use crate::quadrature::{Domain, QuadratureRule};
use crate::report::VerificationReport;
use crate::specfun::ln_hille_hardy_kernel;

/// Smallest ε for which the kernel route is offered; the kernel width
/// shrinks like √ε and would need ever finer rules.
pub const KERNEL_MIN_EPS: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    KernelQuadrature,
    BasisExpansion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorApplication {
    pub epsilon: f64,
    pub alpha: f64,
    pub input: GridFunction,
    pub output: GridFunction,
    pub route: Route,
}

fn check_alpha_eps(alpha: f64, epsilon: f64) -> Result<()> {
    if !(alpha > 1.5) {
        return Err(Error::InvalidParam {
            name: "alpha",
            msg: format!("must exceed 3/2, got {alpha}"),
        });
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParam {
            name: "epsilon",
            msg: format!("must be positive, got {epsilon}"),
        });
    }
    Ok(())
}

fn require_half_line(phi: &GridFunction) -> Result<()> {
    if phi.domain() != Domain::HalfLine {
        return Err(Error::InvalidParam {
            name: "phi",
            msg: "expected samples on a half-line rule".into(),
        });
    }
    Ok(())
}

fn ln_kernel_g(epsilon: f64, alpha: f64, u: f64, v: f64) -> Result<f64> {
    let ln_k = ln_hille_hardy_kernel((-epsilon).exp(), u * u, v * v, alpha)?;
    Ok(std::f64::consts::LN_2 + (alpha - 0.5) * (u * v).ln() - 0.5 * (u * u + v * v) + ln_k)
}

/// G_ε^α(u,v) = Σ_m e^{-mε} ⟨u|m;α⟩⟨v|m;α⟩, in closed form.
pub fn kernel_g(epsilon: f64, alpha: f64, u: f64, v: f64) -> Result<f64> {
    check_alpha_eps(alpha, epsilon)?;
    if !(u >= 0.0 && v >= 0.0) {
        return Err(domain("kernel_g", format!("need u, v ≥ 0, got ({u}, {v})")));
    }
    if u == 0.0 || v == 0.0 {
        return Ok(0.0);
    }
    Ok(ln_kernel_g(epsilon, alpha, u, v)?.exp())
}

/// Width of v ↦ G(u,v) around its peak: √((1-τ)/(1+τ)), τ = e^{-ε}.
pub fn kernel_bandwidth(epsilon: f64) -> f64 {
    let one_minus = -(-epsilon).exp_m1();
    (one_minus / (2.0 - one_minus)).sqrt()
}

/// Largest node spacing over the region where |φ| exceeds 1e-6 of its max.
fn active_spacing(phi: &GridFunction) -> f64 {
    let cutoff = 1e-6 * phi.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let x = phi.nodes();
    (1..x.len())
        .filter(|&i| phi.values[i].norm() > cutoff || phi.values[i - 1].norm() > cutoff)
        .map(|i| x[i] - x[i - 1])
        .fold(0.0, f64::max)
}

/// Quadrature discretization w_j G(x_i, x_j) of O_ε on one half-line rule.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    pub epsilon: f64,
    pub alpha: f64,
    pub rule: Arc<QuadratureRule>,
    /// Row-major G(x_i, x_j), without weights.
    values: Vec<f64>,
}

impl KernelMatrix {
    pub fn new(epsilon: f64, alpha: f64, rule: Arc<QuadratureRule>) -> Result<Self> {
        check_alpha_eps(alpha, epsilon)?;
        if epsilon < KERNEL_MIN_EPS {
            return Err(domain(
                "apply_o_kernel",
                format!("kernel route needs ε ≥ {KERNEL_MIN_EPS}, got {epsilon}; use the basis route"),
            ));
        }
        if rule.domain != Domain::HalfLine {
            return Err(Error::InvalidParam {
                name: "rule",
                msg: "expected a half-line rule".into(),
            });
        }
        let x = &rule.nodes;
        let n = x.len();
        let rows: Result<Vec<Vec<f64>>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if j < i {
                            return Ok(f64::NAN); // filled from the transpose
                        }
                        if x[i] == 0.0 || x[j] == 0.0 {
                            return Ok(0.0);
                        }
                        Ok(ln_kernel_g(epsilon, alpha, x[i], x[j])?.exp())
                    })
                    .collect()
            })
            .collect();
        let mut values = rows?.concat();
        for i in 0..n {
            for j in 0..i {
                values[i * n + j] = values[j * n + i];
            }
        }
        Ok(KernelMatrix {
            epsilon,
            alpha,
            rule,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.rule.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rule.is_empty()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    /// O_ε[φ](x_i) = Σ_j w_j G(x_i, x_j) φ(x_j).
    pub fn apply(&self, phi: &GridFunction) -> Result<GridFunction> {
        require_half_line(phi)?;
        if phi.rule != self.rule {
            return Err(Error::InvalidParam {
                name: "phi",
                msg: "samples were taken on a different rule".into(),
            });
        }
        let sigma = kernel_bandwidth(self.epsilon);
        let spacing = active_spacing(phi);
        if spacing > sigma {
            log::warn!(
                "node spacing {spacing:.3e} exceeds the kernel width {sigma:.3e} at ε = {}; refine the rule",
                self.epsilon
            );
        }
        let n = self.len();
        let w = &self.rule.weights;
        let weighted: Vec<Complex64> = phi.values.iter().zip(w).map(|(v, w)| v * w).collect();
        let values = (0..n)
            .into_par_iter()
            .map(|i| {
                let row = &self.values[i * n..(i + 1) * n];
                row.iter().zip(&weighted).map(|(g, v)| v * g).sum()
            })
            .collect();
        GridFunction::new(Arc::clone(&self.rule), values)
    }

    /// Eigenvalues of the symmetrized matrix W^{1/2} G W^{1/2}, ascending.
    /// They approximate e^{-mε} for the modes the rule resolves and vanish
    /// (up to rounding) otherwise.
    pub fn spectrum(&self) -> Vec<f64> {
        let n = self.len();
        let sw: Vec<f64> = self.rule.weights.iter().map(|w| w.sqrt()).collect();
        let m = DMatrix::from_fn(n, n, |i, j| sw[i] * self.entry(i, j) * sw[j]);
        let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// O_ε[φ] by quadrature of the kernel over the rule φ is sampled on.
pub fn apply_o_kernel(epsilon: f64, alpha: f64, phi: &GridFunction) -> Result<OperatorApplication> {
    require_half_line(phi)?;
    let km = KernelMatrix::new(epsilon, alpha, Arc::clone(&phi.rule))?;
    let output = km.apply(phi)?;
    Ok(OperatorApplication {
        epsilon,
        alpha,
        input: phi.clone(),
        output,
        route: Route::KernelQuadrature,
    })
}

/// Basis values ⟨x_i|m;α⟩, one row per node.
fn basis_table(n_max: usize, alpha: f64, nodes: &[f64]) -> Result<Vec<Vec<f64>>> {
    nodes.par_iter().map(|&x| eigenfunctions(n_max, alpha, x)).collect()
}

/// ⟨m;α|φ⟩ for m ≤ n_max by quadrature.
pub fn project(alpha: f64, phi: &GridFunction, n_max: usize) -> Result<Vec<Complex64>> {
    require_half_line(phi)?;
    let table = basis_table(n_max, alpha, phi.nodes())?;
    let mut c = vec![Complex64::new(0.0, 0.0); n_max + 1];
    for ((row, v), w) in table.iter().zip(&phi.values).zip(&phi.rule.weights) {
        for (cm, b) in c.iter_mut().zip(row) {
            *cm += v * (w * b);
        }
    }
    Ok(c)
}

/// Σ_m c_m ⟨x|m;α⟩ at the nodes of `rule`.
pub fn synthesize(alpha: f64, coeffs: &[Complex64], rule: Arc<QuadratureRule>) -> Result<GridFunction> {
    if coeffs.is_empty() {
        return Ok(GridFunction::zeros(rule));
    }
    let table = basis_table(coeffs.len() - 1, alpha, &rule.nodes)?;
    let values = table
        .iter()
        .map(|row| row.iter().zip(coeffs).map(|(b, c)| c * b).sum())
        .collect();
    GridFunction::new(rule, values)
}

/// O_ε[φ] = Σ_{m≤n_max} e^{-mε} ⟨m;α|φ⟩ |m;α⟩. Warns when the first
/// n_max+1 modes capture less than 99.9% of ‖φ‖².
pub fn apply_o_basis(epsilon: f64, alpha: f64, phi: &GridFunction, n_max: usize) -> Result<OperatorApplication> {
    check_alpha_eps(alpha, epsilon)?;
    let c = project(alpha, phi, n_max)?;
    let captured: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    let total = phi.norm().powi(2);
    if captured < 0.999 * total {
        log::warn!("projection onto {} modes captures {captured:.6e} of ‖φ‖² = {total:.6e}", n_max + 1);
    }
    let damped: Vec<Complex64> = c
        .iter()
        .enumerate()
        .map(|(m, z)| z * (-(m as f64) * epsilon).exp())
        .collect();
    let output = synthesize(alpha, &damped, Arc::clone(&phi.rule))?;
    Ok(OperatorApplication {
        epsilon,
        alpha,
        input: phi.clone(),
        output,
        route: Route::BasisExpansion,
    })
}

/// Number of basis modes used when [`convergence_report`] takes the basis
/// route.
pub const REPORT_BASIS_MODES: usize = 120;

/// Grid-L² errors ‖O_ε[φ] - φ‖ along a decreasing ε schedule. One report
/// per ε (passing when the error is below the previous one), then a fitted
/// power law err ≈ C ε^p (passing when p > 0). ε below [`KERNEL_MIN_EPS`]
/// uses the basis route.
pub fn convergence_report(alpha: f64, phi: &GridFunction, eps_schedule: &[f64]) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let mut points = Vec::new();
    let mut previous = f64::INFINITY;
    for w in eps_schedule.windows(2) {
        if !(w[1] < w[0]) {
            out.push(VerificationReport::failed(
                "identity.convergence",
                &[("alpha", alpha)],
                format!("schedule must decrease strictly, got {} then {}", w[0], w[1]),
            ));
            return out;
        }
    }
    for &eps in eps_schedule {
        let params = [("alpha", alpha), ("epsilon", eps)];
        let applied = if eps >= KERNEL_MIN_EPS {
            apply_o_kernel(eps, alpha, phi)
        } else {
            apply_o_basis(eps, alpha, phi, REPORT_BASIS_MODES)
        };
        match applied {
            Ok(app) => {
                let err = app.output.sub(phi).norm();
                let mut r = VerificationReport::new("identity.convergence", &params, err, previous);
                r.pass = err < previous;
                out.push(r);
                points.push((eps.ln(), err.ln()));
                previous = err;
            }
            Err(e) => out.push(VerificationReport::failed("identity.convergence", &params, e.to_string())),
        }
    }
    if points.len() >= 2 {
        let n = points.len() as f64;
        let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let rate = sxy / sxx;
        let mut r = VerificationReport::new("identity.convergence_rate", &[("alpha", alpha)], rate, 0.0);
        r.pass = rate > 0.0;
        out.push(r.with_note("fitted exponent p in ‖O_ε φ - φ‖ ≈ C ε^p"));
    }
    out
}

/// ∫ ⟨j|ψ_θ⟩⟨ψ_θ|k⟩ dμ_{γ,ε}(θ) for j, k < n_block by circle quadrature,
/// where ψ_θ = |e^{iθ}; ε, γ, α⟩. The exact value is δ_{jk} e^{-jε}.
pub fn resolution_block(gamma: f64, epsilon: f64, n_block: usize, rule: &QuadratureRule) -> Result<Vec<Vec<Complex64>>> {
    if rule.domain != Domain::Circle {
        return Err(Error::InvalidParam {
            name: "rule",
            msg: "expected a circle rule".into(),
        });
    }
    if n_block == 0 {
        return Ok(Vec::new());
    }
    // α does not enter the coefficients
    let params = ModelParams::coupled(gamma, epsilon)?;
    let contributions: Result<Vec<Vec<Complex64>>> = rule
        .nodes
        .par_iter()
        .zip(&rule.weights)
        .map(|(&theta, &w)| {
            let c = coefficients(n_block - 1, &params, theta, f64::INFINITY)?.coeffs;
            let mu = w * measure_density(gamma, epsilon, theta)?;
            let mut block = Vec::with_capacity(n_block * n_block);
            for cj in &c {
                for ck in &c {
                    block.push(cj * ck.conj() * mu);
                }
            }
            Ok(block)
        })
        .collect();
    let mut acc = vec![Complex64::new(0.0, 0.0); n_block * n_block];
    for block in contributions? {
        for (a, b) in acc.iter_mut().zip(block) {
            *a += b;
        }
    }
    Ok(acc.chunks(n_block).map(|r| r.to_vec()).collect())
}
