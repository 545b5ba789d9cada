//! Two generating-function identities behind the closed forms, each with
//! a tail-bounded series side and a closed side.
//!
//! Bilinear ₂F₁ sum (normalization):
//!
//!   Σ_n (c)_n rⁿ/n! ₂F₁(-n,a;c;ξ) ₂F₁(-n,b;c;ζ)
//!     = (1-r)^{a+b-c} (1-r+ξr)^{-a} (1-r+ζr)^{-b}
//!       · ₂F₁(a, b; c; rξζ/((1-r+ξr)(1-r+ζr))).
//!
//! Laguerre generating formula (wavefunction):
//!
//!   Σ_n tⁿ ₂F₁(-n,c;1+ν;y) L_n^{(ν)}(u)
//!     = (1-t)^{-1+c-ν} (1-t+yt)^{-c} e^{-ut/(1-t)}
//!       · ₁F₁(c; 1+ν; yut/((1-t)(1-t+yt))).

use num_complex::Complex64;

use crate::cjacobi::jacobi_sequence;
use crate::error::{domain, Error, Result};
use crate::specfun::hypergeometric::hyp2f1_with_complement;
use crate::specfun::{hyp1f1_scaled, ComplexSum, SeriesResult};

const MAX_TERMS: usize = 200_000;
const COMPLEX_2F1_MAX_TERMS: usize = 20_000;

/// Both P_n = (c)_n/n! ₂F₁(-n,a;c;1-w) and the series below need
/// nonnegative Taylor coefficients of (1-wt)^{-a}(1-t)^{-(c-a)} for the
/// bound |P_n| ≤ (c)_n/n! max(1,|w|)ⁿ.
fn check_positive_coefficients(func: &'static str, a: f64, c: f64) -> Result<()> {
    if !(a > 0.0 && c >= a) {
        return Err(domain(func, format!("need 0 < a ≤ c, got a={a}, c={c}")));
    }
    Ok(())
}

/// Sums terms n = 0, 1, … produced by `term` until the bound on the
/// remainder Σ_{m>n} (c)_m/m! qᵐ · scale falls below tol · |sum|.
fn sum_with_binomial_tail<F>(func: &'static str, c: f64, q: f64, scale: f64, tol: f64, mut term: F) -> Result<SeriesResult>
where
    F: FnMut(usize) -> Complex64,
{
    if !(q < 1.0) {
        return Err(domain(func, format!("series ratio bound {q} is not below 1")));
    }
    let mut sum = ComplexSum::new();
    let mut bound = scale; // (c)_n/n! qⁿ · scale
    for n in 0..MAX_TERMS {
        sum.add(term(n));
        let nf = n as f64;
        bound *= q * (c + nf) / (nf + 1.0);
        // later ratios q(c+m)/(m+1), m ≥ n+1, are bounded by this one
        let ratio = q * f64::max(1.0, (c + nf + 1.0) / (nf + 2.0));
        if ratio < 1.0 {
            let tail = bound / (1.0 - ratio);
            if tail <= tol * sum.value().norm() {
                return Ok(SeriesResult {
                    value: sum.value(),
                    terms_used: n + 1,
                    tail_bound: tail,
                });
            }
        }
    }
    Err(Error::NonConvergence {
        func,
        terms: MAX_TERMS,
        tail: bound,
    })
}

/// Left side of the bilinear ₂F₁ identity, summed until the a-priori tail
/// bound is below `tol` relative to the partial sum. Requires 0 < a ≤ c,
/// 0 < b ≤ c, 0 < r < 1 and r·max(1,|1-ξ|)·max(1,|1-ζ|) < 1.
pub fn bilinear_2f1_sum(
    a: f64,
    b: f64,
    c: f64,
    r: f64,
    xi: Complex64,
    zeta: Complex64,
    tol: f64,
) -> Result<SeriesResult> {
    check_positive_coefficients("bilinear_2f1_sum", a, c)?;
    check_positive_coefficients("bilinear_2f1_sum", b, c)?;
    if !(r > 0.0 && r < 1.0) {
        return Err(domain("bilinear_2f1_sum", format!("need 0 < r < 1, got {r}")));
    }
    let (w1, w2) = (1.0 - xi, 1.0 - zeta);
    let q = r * w1.norm().max(1.0) * w2.norm().max(1.0);
    // grow the sequences in blocks, the sum usually stops early
    let mut len = 64usize;
    let mut p = jacobi_sequence(len, a, c, w1);
    let mut s = jacobi_sequence(len, b, c, w2);
    let mut norm = vec![1.0]; // (c)_n/n!
    let mut damp = vec![1.0]; // rⁿ
    sum_with_binomial_tail("bilinear_2f1_sum", c, q, 1.0, tol, |n| {
        if n > len {
            len *= 2;
            p = jacobi_sequence(len, a, c, w1);
            s = jacobi_sequence(len, b, c, w2);
        }
        while norm.len() <= n {
            let m = norm.len() - 1;
            norm.push(norm[m] * (c + m as f64) / (m as f64 + 1.0));
            damp.push(r.powi(m as i32 + 1));
        }
        // (c)_n rⁿ/n! · F F = rⁿ P_n S_n / ((c)_n/n!)
        p[n] * s[n] * (damp[n] / norm[n])
    })
}

/// Gauss series ₂F₁(a,b;c;z) for complex |z| < 0.95.
fn hyp2f1_complex(a: f64, b: f64, c: f64, z: Complex64) -> Result<Complex64> {
    if z.norm() >= 0.95 {
        return Err(domain("hyp2f1", format!("complex argument needs |z| < 0.95, got {}", z.norm())));
    }
    let mut sum = ComplexSum::new();
    let mut term = Complex64::new(1.0, 0.0);
    for k in 0..COMPLEX_2F1_MAX_TERMS {
        sum.add(term);
        let kf = k as f64;
        term *= z * ((a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)));
        if term.norm() <= 1e-17 * sum.value().norm() {
            return Ok(sum.value());
        }
    }
    Err(Error::NonConvergence {
        func: "hyp2f1",
        terms: COMPLEX_2F1_MAX_TERMS,
        tail: term.norm(),
    })
}

/// Right side of the bilinear ₂F₁ identity (principal branches).
///
/// When the ₂F₁ argument Z is real (as for ζ = conj ξ) the real routine
/// is used with 1 - Z = (1-r)(1 - r(1-ξ)(1-ζ))/((1-r+ξr)(1-r+ζr)) passed
/// separately, so Z → 1 keeps its accuracy.
pub fn bilinear_2f1_closed(a: f64, b: f64, c: f64, r: f64, xi: Complex64, zeta: Complex64) -> Result<Complex64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(domain("bilinear_2f1_closed", format!("need 0 < r < 1, got {r}")));
    }
    let u = (1.0 - r) + xi * r;
    let v = (1.0 - r) + zeta * r;
    let d = u * v;
    let z = xi * zeta * r / d;
    let one_minus_z = (1.0 - r) * (1.0 - (1.0 - xi) * (1.0 - zeta) * r) / d;
    let f = if z.im.abs() <= 1e-14 * z.norm() && z.re >= 0.0 && a > 0.0 && b > 0.0 && c > 0.0 {
        Complex64::new(hyp2f1_with_complement(a, b, c, z.re, one_minus_z.re)?.value.re, 0.0)
    } else {
        hyp2f1_complex(a, b, c, z)?
    };
    let pre = ((a + b - c) * (1.0 - r).ln() - a * u.ln() - b * v.ln()).exp();
    Ok(pre * f)
}

/// Left side of the Laguerre generating formula, summed until the
/// a-priori tail bound is below `tol` relative to the partial sum.
///
/// Uses |₂F₁(-n,c;1+ν;y)| ≤ max(1,|1-y|)ⁿ (valid for 0 < c ≤ 1+ν) and
/// |L_n^{(ν)}(u)| ≤ (ν+1)_n/n! e^{u/2} (ν ≥ 0, u ≥ 0). The bound is loose
/// when the sum itself is small, which happens for large u·t/(1-t).
pub fn laguerre_2f1_sum(t: f64, c: f64, nu: f64, y: Complex64, u: f64, tol: f64) -> Result<SeriesResult> {
    check_positive_coefficients("laguerre_2f1_sum", c, 1.0 + nu)?;
    if !(nu >= 0.0) {
        return Err(domain("laguerre_2f1_sum", format!("need ν ≥ 0, got {nu}")));
    }
    if !(u >= 0.0 && u.is_finite()) {
        return Err(domain("laguerre_2f1_sum", format!("need u ≥ 0, got {u}")));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(domain("laguerre_2f1_sum", format!("need 0 < t < 1, got {t}")));
    }
    let w = 1.0 - y;
    let q = t * w.norm().max(1.0);
    let mut len = 64usize;
    let mut p = jacobi_sequence(len, c, 1.0 + nu, w);
    let mut norm = vec![1.0]; // (1+ν)_n/n!
    let (mut lag_prev, mut lag) = (0.0, 1.0);
    sum_with_binomial_tail("laguerre_2f1_sum", 1.0 + nu, q, (0.5 * u).exp(), tol, |n| {
        if n > len {
            len *= 2;
            p = jacobi_sequence(len, c, 1.0 + nu, w);
        }
        while norm.len() <= n {
            let m = norm.len() - 1;
            norm.push(norm[m] * (1.0 + nu + m as f64) / (m as f64 + 1.0));
        }
        if n > 0 {
            let k = (n - 1) as f64;
            let next = ((2.0 * k + 1.0 + nu - u) * lag - (k + nu) * lag_prev) / (k + 1.0);
            lag_prev = lag;
            lag = next;
        }
        p[n] * (t.powi(n as i32) * lag / norm[n])
    })
}

/// Right side of the Laguerre generating formula (principal branches;
/// the exponential and the growth of ₁F₁ are combined in log space).
pub fn laguerre_2f1_closed(t: f64, c: f64, nu: f64, y: Complex64, u: f64) -> Result<Complex64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(domain("laguerre_2f1_closed", format!("need 0 < t < 1, got {t}")));
    }
    let v = (1.0 - t) + y * t;
    let z = y * (u * t / (1.0 - t)) / v;
    let f = hyp1f1_scaled(c, 1.0 + nu, z)?;
    let log_pre = (c - nu - 1.0) * (1.0 - t).ln() - c * v.ln() - u * t / (1.0 - t) + f.log_scale;
    Ok(log_pre.exp() * f.mantissa)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn bilinear_at_zero_arguments() {
        // ξ = ζ = 0: Σ (c)_n rⁿ/n! = (1-r)^{-c}
        let zero = Complex64::new(0.0, 0.0);
        let s = bilinear_2f1_sum(1.2, 0.7, 2.0, 0.4, zero, zero, 1e-15).unwrap();
        let want = 0.6f64.powf(-2.0);
        assert!((s.value.re - want).abs() < 1e-13 * want);
        let c = bilinear_2f1_closed(1.2, 0.7, 2.0, 0.4, zero, zero).unwrap();
        assert!((c.re - want).abs() < 1e-13 * want);
    }

    #[test]
    fn bilinear_circle_configuration() {
        let gamma = 1.5;
        let a = 0.5 * gamma + 1.0;
        let xi = 1.0 - Complex64::from_polar(1.0, 2.0);
        let r = (-0.3f64).exp();
        let s = bilinear_2f1_sum(a, a, gamma + 1.0, r, xi, xi.conj(), 1e-15).unwrap();
        let c = bilinear_2f1_closed(a, a, gamma + 1.0, r, xi, xi.conj()).unwrap();
        assert!(rel(s.value, c) < 1e-11, "{} vs {}", s.value, c);
    }

    #[test]
    fn bilinear_complex_argument() {
        let xi = Complex64::new(0.2, 0.1);
        let zeta = Complex64::new(-0.1, 0.3);
        let s = bilinear_2f1_sum(0.8, 1.1, 1.7, 0.5, xi, zeta, 1e-15).unwrap();
        let c = bilinear_2f1_closed(0.8, 1.1, 1.7, 0.5, xi, zeta).unwrap();
        assert!(rel(s.value, c) < 1e-12);
    }

    #[test]
    fn laguerre_generating_function_at_y_zero() {
        // y = 0: Σ tⁿ L_n^{(ν)}(u) = (1-t)^{-1-ν} e^{-ut/(1-t)}
        let (t, nu, u) = (0.4, 1.5, 2.0);
        let want = (1.0f64 - t).powf(-1.0 - nu) * (-u * t / (1.0 - t)).exp();
        let s = laguerre_2f1_sum(t, 1.0, nu, Complex64::new(0.0, 0.0), u, 1e-15).unwrap();
        let c = laguerre_2f1_closed(t, 1.0, nu, Complex64::new(0.0, 0.0), u).unwrap();
        assert!((s.value.re - want).abs() < 1e-12 * want);
        assert!((c.re - want).abs() < 1e-13 * want);
    }

    #[test]
    fn laguerre_generating_circle_configuration() {
        let gamma = 2.0;
        let y = 1.0 - Complex64::from_polar(1.0, 1.3);
        let s = laguerre_2f1_sum(0.5, 0.5 * gamma + 1.0, gamma, y, 1.7, 1e-15).unwrap();
        let c = laguerre_2f1_closed(0.5, 0.5 * gamma + 1.0, gamma, y, 1.7).unwrap();
        assert!(rel(s.value, c) < 1e-11, "{} vs {}", s.value, c);
    }
}
