//! Modified Bessel function of the first kind for ν ≥ 0, x ≥ 0.

use super::gamma::ln_gamma;
use super::sum::KahanSum;
use crate::error::{domain, Error, Result};

/// Above this argument the large-x expansion is tried first.
const ASYMPTOTIC_SWITCH: f64 = 30.0;
const MIN_ASYMPTOTIC_TERMS: usize = 8;

fn check(func: &'static str, nu: f64, x: f64) -> Result<()> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(domain(func, format!("order must be non-negative, got {nu}")));
    }
    if !(x >= 0.0) || x.is_nan() {
        return Err(domain(func, format!("argument must be non-negative, got {x}")));
    }
    Ok(())
}

/// ln Σ_k (x²/4)ᵏ / (k! (ν+1)_k), summed relative to the largest term.
fn ln_reduced_series(nu: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    if q == 0.0 {
        return 0.0;
    }
    // terms peak near k ≈ x/2; accumulate relative to the running maximum
    let mut ln_term = 0.0f64;
    let mut ln_max = 0.0f64;
    let mut sum = KahanSum::new();
    sum.add(1.0);
    let ln_q = q.ln();
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        ln_term += ln_q - (kf + 1.0).ln() - (nu + kf + 1.0).ln();
        k += 1;
        if ln_term > ln_max {
            let rescale = (ln_max - ln_term).exp();
            let v = sum.value() * rescale;
            sum = KahanSum::new();
            sum.add(v);
            ln_max = ln_term;
        }
        let rel = (ln_term - ln_max).exp();
        sum.add(rel);
        let ratio = q / ((kf + 2.0) * (nu + kf + 2.0));
        if ratio < 0.5 && rel < 1e-17 * sum.value() {
            break;
        }
    }
    sum.value().ln() + ln_max
}

/// ln(e^{-x} √(2πx) I_ν(x)) from the large-argument expansion, or `None`
/// when its smallest term is not small enough.
fn ln_asymptotic_core(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0f64;
    let mut sum = KahanSum::new();
    sum.add(term);
    for k in 0..60usize {
        let odd = (2 * k + 1) as f64;
        let next = -term * (mu - odd * odd) / ((k as f64 + 1.0) * 8.0 * x);
        if next == 0.0 {
            return Some(sum.value().ln());
        }
        if next.abs() > term.abs() && k + 1 < MIN_ASYMPTOTIC_TERMS {
            return None;
        }
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum.add(term);
        if k + 1 >= MIN_ASYMPTOTIC_TERMS && term.abs() <= 1e-17 * sum.value().abs() {
            return Some(sum.value().ln());
        }
    }
    if term.abs() <= 1e-15 * sum.value().abs() {
        Some(sum.value().ln())
    } else {
        None
    }
}

/// ln I_ν(x); -∞ at x = 0 for ν > 0.
pub fn ln_bessel_i(nu: f64, x: f64) -> Result<f64> {
    check("ln_bessel_i", nu, x)?;
    if x == 0.0 {
        return Ok(if nu == 0.0 { 0.0 } else { f64::NEG_INFINITY });
    }
    if x > ASYMPTOTIC_SWITCH {
        if let Some(core) = ln_asymptotic_core(nu, x) {
            return Ok(x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + core);
        }
    }
    Ok(nu * (0.5 * x).ln() + ln_reduced_series(nu, x) - ln_gamma(nu + 1.0))
}

/// ln Ĩ_ν(x) where Ĩ_ν(x) = I_ν(x) / (x/2)^ν is entire in x with
/// Ĩ_ν(0) = 1/Γ(ν+1).
pub fn ln_bessel_i_reduced(nu: f64, x: f64) -> Result<f64> {
    check("ln_bessel_i_reduced", nu, x)?;
    if x > ASYMPTOTIC_SWITCH {
        if let Some(core) = ln_asymptotic_core(nu, x) {
            return Ok(x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + core - nu * (0.5 * x).ln());
        }
    }
    Ok(ln_reduced_series(nu, x) - ln_gamma(nu + 1.0))
}

/// I_ν(x). Errors with [`Error::Overflow`] when the value is not
/// representable; use [`bessel_i_scaled`] or [`ln_bessel_i`] instead.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    let v = ln_bessel_i(nu, x)?.exp();
    if v.is_infinite() {
        return Err(Error::Overflow { func: "bessel_i" });
    }
    Ok(v)
}

/// e^{-x} I_ν(x).
pub fn bessel_i_scaled(nu: f64, x: f64) -> Result<f64> {
    Ok((ln_bessel_i(nu, x)? - x).exp())
}

/// Ĩ_ν(x) = I_ν(x) / (x/2)^ν.
pub fn bessel_i_reduced(nu: f64, x: f64) -> Result<f64> {
    Ok(ln_bessel_i_reduced(nu, x)?.exp())
}
