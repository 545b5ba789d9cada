//! Pseudoharmonic oscillator H = -d²/dx² + x² + a/x² on the half-line:
//! spectrum λ_n = 2(2n + α) and orthonormal eigenfunctions
//!
//!   ⟨x|n;α⟩ = (2 n!/Γ(n+α))^{1/2} x^{α-1/2} e^{-x²/2} L_n^{(α-1)}(x²),
//!
//! with α = 1 + ½√(1+4a).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::ln_gamma;

/// Parameter bundle (γ, a, α, ε).
///
/// `alpha` always satisfies α = 1 + ½√(1+4a). In the coupled regime
/// α = γ + 1 is enforced as well.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    /// Circular-Jacobi charge γ ≥ 0. Zero until set with
    /// [`ModelParams::with_gamma`] or [`couple_gamma`].
    pub gamma: f64,
    /// Singular coupling a.
    pub a: f64,
    pub alpha: f64,
    /// Regularization ε > 0.
    pub epsilon: f64,
    pub coupled: bool,
}

fn invalid(name: &'static str, msg: impl Into<String>) -> Error {
    Error::InvalidParam {
        name,
        msg: msg.into(),
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(invalid("epsilon", format!("must be positive, got {epsilon}")));
    }
    Ok(())
}

/// Builds uncoupled parameters from the coupling a > 0. Rejects a → 0,
/// which would give α = 3/2.
pub fn params_from_a(a: f64, epsilon: f64) -> Result<ModelParams> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(invalid("a", format!("must be positive, got {a}")));
    }
    check_epsilon(epsilon)?;
    let alpha = 1.0 + 0.5 * (1.0 + 4.0 * a).sqrt();
    if !(alpha > 1.5) {
        return Err(invalid("a", format!("gives α = {alpha}, need α > 3/2")));
    }
    Ok(ModelParams {
        gamma: 0.0,
        a,
        alpha,
        epsilon,
        coupled: false,
    })
}

/// Sets γ := α - 1 and marks the parameters as coupled.
pub fn couple_gamma(p: ModelParams) -> ModelParams {
    ModelParams {
        gamma: p.alpha - 1.0,
        coupled: true,
        ..p
    }
}

/// a = (α-1)² - 1/4, the inverse of α = 1 + ½√(1+4a).
pub fn coupling_from_alpha(alpha: f64) -> f64 {
    (alpha - 1.0).powi(2) - 0.25
}

impl ModelParams {
    /// Uncoupled parameters from α > 3/2 directly.
    pub fn from_alpha(alpha: f64, epsilon: f64) -> Result<Self> {
        if !(alpha > 1.5 && alpha.is_finite()) {
            return Err(invalid("alpha", format!("need α > 3/2, got {alpha}")));
        }
        check_epsilon(epsilon)?;
        Ok(ModelParams {
            gamma: 0.0,
            a: coupling_from_alpha(alpha),
            alpha,
            epsilon,
            coupled: false,
        })
    }

    /// Coupled parameters α = γ + 1 for any γ ≥ 0.
    ///
    /// For γ ≤ 1/2 this gives α ≤ 3/2 and a = γ² - 1/4 ≤ 0, outside the
    /// strict range of [`params_from_a`]; the coherent-state formulas remain
    /// well defined there (the basis ⟨x|n;α⟩ only needs α > 0), so the
    /// coupled constructor accepts it.
    pub fn coupled(gamma: f64, epsilon: f64) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(invalid("gamma", format!("must be non-negative, got {gamma}")));
        }
        check_epsilon(epsilon)?;
        Ok(ModelParams {
            gamma,
            a: gamma * gamma - 0.25,
            alpha: gamma + 1.0,
            epsilon,
            coupled: true,
        })
    }

    /// Sets γ on uncoupled parameters.
    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(invalid("gamma", format!("must be non-negative, got {gamma}")));
        }
        if self.coupled && (gamma + 1.0 - self.alpha).abs() > 1e-12 {
            return Err(invalid("gamma", "coupled parameters require γ = α - 1"));
        }
        Ok(ModelParams { gamma, ..self })
    }

    pub fn with_epsilon(self, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(ModelParams { epsilon, ..self })
    }
}

/// Molecular parametrization of the potential: force constant ϱ and
/// equilibrium bond length κ₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MolecularParams {
    pub rho: f64,
    pub kappa0: f64,
}

fn check_molecular(m: &MolecularParams) -> Result<()> {
    if !(m.rho > 0.0 && m.rho.is_finite()) {
        return Err(invalid("rho", format!("must be positive, got {}", m.rho)));
    }
    if !(m.kappa0 > 0.0 && m.kappa0.is_finite()) {
        return Err(invalid("kappa0", format!("must be positive, got {}", m.kappa0)));
    }
    Ok(())
}

/// a = ϱκ₀².
pub fn molecular_to_a(m: MolecularParams) -> Result<f64> {
    check_molecular(&m)?;
    Ok(m.rho * m.kappa0 * m.kappa0)
}

/// λ_n = 2(2n + α).
pub fn eigenvalue(n: usize, alpha: f64) -> f64 {
    2.0 * (2.0 * n as f64 + alpha)
}

/// E_n = 4κ₀⁻¹√ϱ (n + 1/2 + ¼(√(1+4ϱκ₀²) - 2κ₀√ϱ)), the spectrum of
/// -d²/dx² + ϱ(x/κ₀ - κ₀/x)². The potential equals x² + a/x² - 2ϱ when
/// κ₀⁻¹√ϱ = 1, so there E_n = [`eigenvalue`] - 2ϱ.
pub fn eigenvalue_molecular(n: usize, m: MolecularParams) -> Result<f64> {
    check_molecular(&m)?;
    let sr = m.rho.sqrt();
    let a = m.rho * m.kappa0 * m.kappa0;
    Ok(4.0 / m.kappa0 * sr * (n as f64 + 0.5 + 0.25 * ((1.0 + 4.0 * a).sqrt() - 2.0 * m.kappa0 * sr)))
}

fn check_basis(alpha: f64, x: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid("alpha", format!("must be positive, got {alpha}")));
    }
    if !(x >= 0.0 && x.is_finite()) {
        return Err(invalid("x", format!("must be a non-negative finite number, got {x}")));
    }
    Ok(())
}

/// ⟨x|n;α⟩ for n = 0..=n_max at one point.
///
/// Uses the recurrence for the normalized Laguerre functions
/// ℓ_n = (n!/Γ(n+α))^{1/2} L_n^{(α-1)}(y),
///
///   √((n+1)(n+α)) ℓ_{n+1} = (2n+α-y) ℓ_n - √(n(n+α-1)) ℓ_{n-1},
///
/// and carries the prefactor √2 x^{α-1/2} e^{-x²/2} as a running log scale
/// so large x neither overflows ℓ_n nor underflows the Gaussian early.
/// Accepts any α > 0; x = 0 gives all zeros.
pub fn eigenfunctions(n_max: usize, alpha: f64, x: f64) -> Result<Vec<f64>> {
    check_basis(alpha, x)?;
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        return Ok(out);
    }
    let y = x * x;
    let mut log_scale =
        0.5 * std::f64::consts::LN_2 + (alpha - 0.5) * x.ln() - 0.5 * y - 0.5 * ln_gamma(alpha);
    let mut prev = 0.0;
    let mut cur = 1.0;
    out[0] = log_scale.exp();
    for n in 0..n_max {
        let nf = n as f64;
        let next = ((2.0 * nf + alpha - y) * cur - (nf * (nf + alpha - 1.0)).sqrt() * prev)
            / ((nf + 1.0) * (nf + alpha)).sqrt();
        prev = cur;
        cur = next;
        let mag = cur.abs();
        if mag > 1e100 || (mag < 1e-100 && mag > 0.0) {
            let shift = mag.ln();
            prev /= mag;
            cur /= mag;
            log_scale += shift;
        }
        out[n + 1] = cur * log_scale.exp();
    }
    Ok(out)
}

/// ⟨x|n;α⟩ for a single n.
pub fn eigenfunction(n: usize, alpha: f64, x: f64) -> Result<f64> {
    Ok(eigenfunctions(n, alpha, x)?[n])
}
