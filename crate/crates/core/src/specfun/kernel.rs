//! Closed form of the bilinear Laguerre series
//!
//!   K(τ; ξ, ζ) = Σ_m τ^m m!/Γ(m+α) L_m^{(α-1)}(ξ) L_m^{(α-1)}(ζ)
//!
//! via the Hille–Hardy formula.

use super::bessel::ln_bessel_i_reduced;
use crate::error::{domain, Result};

/// ln K(τ; ξ, ζ) =
///   -α ln(1-τ) - τ(ξ+ζ)/(1-τ) + ln Ĩ_{α-1}(2√(ξζτ)/(1-τ)),
/// with Ĩ_ν(w) = I_ν(w)/(w/2)^ν, which makes ξζ = 0 a regular point.
pub fn ln_hille_hardy_kernel(tau: f64, xi: f64, zeta: f64, alpha: f64) -> Result<f64> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(domain("hille_hardy_kernel", format!("τ must lie in (0, 1), got {tau}")));
    }
    if !(alpha > 1.5) {
        return Err(domain("hille_hardy_kernel", format!("α must exceed 3/2, got {alpha}")));
    }
    if !(xi >= 0.0 && zeta >= 0.0) {
        return Err(domain("hille_hardy_kernel", "ξ and ζ must be non-negative"));
    }
    let one_minus = 1.0 - tau;
    let w = 2.0 * (xi * zeta * tau).sqrt() / one_minus;
    Ok(-alpha * (-tau).ln_1p() - tau * (xi + zeta) / one_minus
        + ln_bessel_i_reduced(alpha - 1.0, w)?)
}

/// K(τ; ξ, ζ); underflows gracefully to 0.
pub fn hille_hardy_kernel(tau: f64, xi: f64, zeta: f64, alpha: f64) -> Result<f64> {
    Ok(ln_hille_hardy_kernel(tau, xi, zeta, alpha)?.exp())
}
