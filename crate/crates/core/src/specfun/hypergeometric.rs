//! Gauss ₂F₁ and Kummer ₁F₁ in the parameter regimes the coherent-state
//! formulas generate.

use num_complex::Complex64;

use super::gamma::{digamma, gamma, ln_gamma, recip_gamma};
use super::sum::{ComplexSum, KahanSum};
use super::{geometric_tail, SeriesResult};
use crate::error::{domain, Error, Result};

/// |z| up to which ₁F₁ is summed from its Taylor series; beyond it the
/// large-argument expansion takes over.
pub const HYP1F1_SERIES_RADIUS: f64 = 40.0;

/// Maximum number of Taylor terms for ₁F₁.
pub const HYP1F1_MAX_TERMS: usize = 500;

const HYP2F1_MAX_TERMS: usize = 4000;
const ASYMPTOTIC_MAX_TERMS: usize = 200;
/// Largest |z| for which a failed large-argument expansion falls back to
/// the Taylor series.
const ASYMPTOTIC_FALLBACK_RADIUS: f64 = 200.0;
const REL_TOL: f64 = 1e-17;

/// A complex number stored as `mantissa * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl Scaled {
    pub fn unscaled(z: Complex64) -> Self {
        Scaled {
            mantissa: z,
            log_scale: 0.0,
        }
    }

    /// Collapses to an ordinary complex number (may overflow to ∞).
    pub fn to_complex(self) -> Complex64 {
        if self.mantissa == Complex64::new(0.0, 0.0) {
            return self.mantissa;
        }
        self.mantissa * self.log_scale.exp()
    }

    /// Natural log of the modulus.
    pub fn ln_norm(self) -> f64 {
        self.mantissa.norm().ln() + self.log_scale
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Γ(num)/Γ(den), staying in log space when both arguments are positive.
fn gamma_ratio(num: f64, den: f64) -> f64 {
    if num > 0.0 && den > 0.0 {
        (ln_gamma(num) - ln_gamma(den)).exp()
    } else {
        gamma(num) * recip_gamma(den)
    }
}

/// Terminating ₂F₁(-n, b; c; z) = Σ_{k≤n} (-n)_k (b)_k / ((c)_k k!) zᵏ.
///
/// When b > 0, c - b ≥ 0 and |1 - z| ≤ 1 the polynomial is summed in the
/// reflected variable w = 1 - z,
///
///   ₂F₁(-n, b; c; z) = Σ_k C(n,k) (b)_k (c-b)_{n-k} / (c)_n · wᵏ,
///
/// whose coefficients are all non-negative. On the unit circle z = 1 - e^{iθ}
/// this removes the ~3ⁿ cancellation of the direct sum.
pub fn hyp2f1_terminating(n: usize, b: f64, c: f64, z: Complex64) -> Complex64 {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let w = Complex64::new(1.0, 0.0) - z;
    // the slack absorbs rounding in 1 - z for z = 1 - e^{iθ}
    if b > 0.0 && c - b >= 0.0 && w.norm() <= 1.0 + 1e-9 {
        reflected_terminating(n, b, c, w)
    } else {
        direct_terminating(n, b, c, z)
    }
}

fn direct_terminating(n: usize, b: f64, c: f64, z: Complex64) -> Complex64 {
    let nf = n as f64;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = ComplexSum::new();
    sum.add(term);
    for k in 0..n {
        let kf = k as f64;
        term *= z * ((kf - nf) * (b + kf) / ((c + kf) * (kf + 1.0)));
        sum.add(term);
    }
    sum.value()
}

fn reflected_terminating(n: usize, b: f64, c: f64, w: Complex64) -> Complex64 {
    let nf = n as f64;
    let cb = c - b;
    // coef_n = (b)_n / (c)_n, then walk down with
    // coef_{k-1} / coef_k = k/(n-k+1) · (c-b+n-k)/(b+k-1)
    let mut coefs = vec![0.0; n + 1];
    let mut top = 1.0;
    for j in 0..n {
        top *= (b + j as f64) / (c + j as f64);
    }
    coefs[n] = top;
    for k in (1..=n).rev() {
        let kf = k as f64;
        coefs[k - 1] = coefs[k] * kf / (nf - kf + 1.0) * (cb + nf - kf) / (b + kf - 1.0);
    }
    let mut sum = ComplexSum::new();
    let mut pow = Complex64::new(1.0, 0.0);
    for &coef in &coefs {
        sum.add(pow * coef);
        pow *= w;
    }
    sum.value()
}

/// Gauss ₂F₁(a, b; c; x) for 0 ≤ x < 1 and positive parameters.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    hyp2f1_series(a, b, c, x).map(|r| r.value.re)
}

/// [`hyp2f1`] with truncation bookkeeping.
///
/// For x ≤ 1/2 the hypergeometric series is summed directly. For x > 1/2
/// and c - a - b = -1 the logarithmic connection formula in powers of
/// (1 - x) is used; its leading term Γ(c)/(Γ(a)Γ(b)) (1-x)⁻¹ carries the
/// blow-up at x → 1. Other parameter sets above 1/2 fall back to the direct
/// series.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, x: f64) -> Result<SeriesResult> {
    hyp2f1_with_complement(a, b, c, x, 1.0 - x)
}

/// Same as [`hyp2f1_series`] but takes 1 - x separately so callers that know
/// it analytically avoid the cancellation near x = 1.
pub(crate) fn hyp2f1_with_complement(
    a: f64,
    b: f64,
    c: f64,
    x: f64,
    one_minus_x: f64,
) -> Result<SeriesResult> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(domain(
            "hyp2f1",
            format!("parameters must be positive, got a={a}, b={b}, c={c}"),
        ));
    }
    if !(0.0..1.0).contains(&x) || !(one_minus_x > 0.0) {
        return Err(domain("hyp2f1", format!("argument must lie in [0, 1), got {x}")));
    }
    if x == 0.0 {
        return Ok(SeriesResult::real(1.0, 1, 0.0));
    }
    let integer_case = ((c - a - b) + 1.0).abs() <= 1e-12 * (1.0 + c.abs());
    if x > 0.5 && integer_case {
        connection_minus_one(a, b, c, one_minus_x)
    } else {
        direct_2f1(a, b, c, x)
    }
}

fn direct_2f1(a: f64, b: f64, c: f64, x: f64) -> Result<SeriesResult> {
    let ratio = |k: f64| (a + k) * (b + k) / ((c + k) * (k + 1.0));
    let mut sum = KahanSum::new();
    let mut term = 1.0;
    sum.add(term);
    for k in 0..HYP2F1_MAX_TERMS {
        let kf = k as f64;
        term *= ratio(kf) * x;
        sum.add(term);
        let r1 = ratio(kf + 1.0);
        let q = r1.max(ratio(kf + 2.0)).max(1.0) * x;
        if kf > a + b + c && q < 1.0 {
            let tail = geometric_tail(term * r1 * x, q);
            if tail <= REL_TOL * sum.value().abs() {
                return Ok(SeriesResult::real(sum.value(), k + 2, tail));
            }
        }
    }
    Err(Error::NonConvergence {
        func: "hyp2f1",
        terms: HYP2F1_MAX_TERMS,
        tail: term.abs(),
    })
}

/// ₂F₁(a, b; a+b-1; x) via
///
///   Γ(c)/(Γ(a)Γ(b)) y⁻¹
///   + Γ(c)/(Γ(a-1)Γ(b-1)) Σ_n (a)_n (b)_n / (n!(n+1)!) yⁿ
///       · [ln y - ψ(n+1) - ψ(n+2) + ψ(a+n) + ψ(b+n)],      y = 1 - x.
fn connection_minus_one(a: f64, b: f64, c: f64, y: f64) -> Result<SeriesResult> {
    let lead = (ln_gamma(c) - ln_gamma(a) - ln_gamma(b)).exp() / y;
    let log_coef = gamma(c) * recip_gamma(a - 1.0) * recip_gamma(b - 1.0);
    if log_coef == 0.0 {
        return Ok(SeriesResult::real(lead, 1, 0.0));
    }
    let ln_y = y.ln();
    let mut psi_n1 = digamma(1.0);
    let mut psi_n2 = digamma(2.0);
    let mut psi_a = digamma(a);
    let mut psi_b = digamma(b);
    let mut u = 1.0;
    let mut sum = KahanSum::new();
    for n in 0..HYP2F1_MAX_TERMS {
        let nf = n as f64;
        let bracket = ln_y - psi_n1 - psi_n2 + psi_a + psi_b;
        sum.add(u * bracket);

        let step = (a + nf) * (b + nf) / ((nf + 1.0) * (nf + 2.0));
        let next_u = u * step * y;
        psi_n1 += 1.0 / (nf + 1.0);
        psi_n2 += 1.0 / (nf + 2.0);
        psi_a += 1.0 / (a + nf);
        psi_b += 1.0 / (b + nf);
        let next_bracket = ln_y - psi_n1 - psi_n2 + psi_a + psi_b;
        let q = step.max(1.0) * y;
        if nf > a + b && q < 1.0 {
            let tail = geometric_tail(next_u * (next_bracket.abs() + 1.0), q);
            let total = lead + log_coef * sum.value();
            if (log_coef * tail).abs() <= REL_TOL * total.abs() {
                return Ok(SeriesResult::real(total, n + 2, (log_coef * tail).abs()));
            }
        }
        u = next_u;
    }
    Err(Error::NonConvergence {
        func: "hyp2f1",
        terms: HYP2F1_MAX_TERMS,
        tail: u.abs(),
    })
}

/// Kummer's confluent function ₁F₁(a; c; z) for c > 0.
///
/// * |z| ≤ [`HYP1F1_SERIES_RADIUS`]: Taylor series (at most
///   [`HYP1F1_MAX_TERMS`] terms).
/// * Re z < 0: Kummer's transformation ₁F₁(a;c;z) = e^z ₁F₁(c-a;c;-z).
/// * otherwise: the two-sided large-|z| expansion.
///
/// Terminating series (a a non-positive integer) are always summed directly.
pub fn hyp1f1(a: f64, c: f64, z: Complex64) -> Result<SeriesResult> {
    let (scaled, terms, rel_tail) = hyp1f1_core(a, c, z)?;
    let value = scaled.to_complex();
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Overflow { func: "hyp1f1" });
    }
    Ok(SeriesResult {
        value,
        terms_used: terms,
        tail_bound: rel_tail * value.norm(),
    })
}

/// ₁F₁(a; c; z) as `mantissa * exp(log_scale)`; never overflows for the
/// exponentially large values reached when Re z ≫ 1.
pub fn hyp1f1_scaled(a: f64, c: f64, z: Complex64) -> Result<Scaled> {
    hyp1f1_core(a, c, z).map(|(s, _, _)| s)
}

fn hyp1f1_core(a: f64, c: f64, z: Complex64) -> Result<(Scaled, usize, f64)> {
    if !(c > 0.0) {
        return Err(domain("hyp1f1", format!("c must be positive, got {c}")));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(domain("hyp1f1", "non-finite argument"));
    }
    if z.norm() == 0.0 || a == 0.0 {
        return Ok((Scaled::unscaled(Complex64::new(1.0, 0.0)), 1, 0.0));
    }
    if is_nonpositive_integer(a) {
        // alternating polynomial: carry it in double-double
        let (v, terms, tail) = taylor_1f1_dd(a, c, z)?;
        return Ok((Scaled::unscaled(v), terms, tail));
    }
    if z.re < 0.0 {
        let (inner, terms, tail) = hyp1f1_core(c - a, c, -z)?;
        let phase = Complex64::from_polar(1.0, z.im);
        return Ok((
            Scaled {
                mantissa: inner.mantissa * phase,
                log_scale: inner.log_scale + z.re,
            },
            terms,
            tail,
        ));
    }
    if z.norm() <= HYP1F1_SERIES_RADIUS {
        let (v, terms, tail) = taylor_1f1(a, c, z)?;
        return Ok((Scaled::unscaled(v), terms, tail));
    }
    match asymptotic_1f1(a, c, z) {
        Err(Error::NonConvergence { .. }) if z.norm() <= ASYMPTOTIC_FALLBACK_RADIUS => {
            // large c - a or 1 - a delays the expansion; sum the series instead
            let (v, terms, tail) = taylor_1f1(a, c, z)?;
            Ok((Scaled::unscaled(v), terms, tail))
        }
        other => other,
    }
}

/// Cancellation e^{|z| - Re z} beyond which the Taylor sum is carried in
/// double-double arithmetic.
const CANCELLATION_LIMIT: f64 = 3.0;

fn taylor_1f1(a: f64, c: f64, z: Complex64) -> Result<(Complex64, usize, f64)> {
    if z.norm() - z.re > CANCELLATION_LIMIT {
        return taylor_1f1_dd(a, c, z);
    }
    let r = z.norm();
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = ComplexSum::new();
    sum.add(term);
    for k in 0..HYP1F1_MAX_TERMS {
        let kf = k as f64;
        term *= z * ((a + kf) / ((c + kf) * (kf + 1.0)));
        sum.add(term);
        let growth = ((a + kf + 1.0) / (c + kf + 1.0)).abs().max(1.0);
        let q = r / (kf + 2.0) * growth;
        if q < 1.0 {
            let next = term.norm() * r * ((a + kf + 1.0) / ((c + kf + 1.0) * (kf + 2.0))).abs();
            let tail = geometric_tail(next, q);
            let s = sum.value().norm();
            if tail <= REL_TOL * s {
                return Ok((sum.value(), k + 2, tail / s.max(f64::MIN_POSITIVE)));
            }
        }
    }
    Err(Error::NonConvergence {
        func: "hyp1f1",
        terms: HYP1F1_MAX_TERMS,
        tail: term.norm(),
    })
}

fn taylor_1f1_dd(a: f64, c: f64, z: Complex64) -> Result<(Complex64, usize, f64)> {
    let r = z.norm();
    let one = Dd::from(1.0);
    let mut term = (one, Dd::from(0.0));
    let mut sum = term;
    for k in 0..HYP1F1_MAX_TERMS {
        let kf = k as f64;
        let ratio = Dd::sum(a, kf) / (Dd::sum(c, kf) * (kf + 1.0));
        let (re, im) = term;
        term = (
            (re * z.re - im * z.im) * ratio,
            (re * z.im + im * z.re) * ratio,
        );
        sum = (sum.0 + term.0, sum.1 + term.1);
        let growth = ((a + kf + 1.0) / (c + kf + 1.0)).abs().max(1.0);
        let q = r / (kf + 2.0) * growth;
        if q < 1.0 {
            let mag = term.0.hi.hypot(term.1.hi);
            let next = mag * r * ((a + kf + 1.0) / ((c + kf + 1.0) * (kf + 2.0))).abs();
            let tail = geometric_tail(next, q);
            let s = sum.0.hi.hypot(sum.1.hi);
            if tail <= REL_TOL * s {
                let value = Complex64::new(sum.0.hi + sum.0.lo, sum.1.hi + sum.1.lo);
                return Ok((value, k + 2, tail / s.max(f64::MIN_POSITIVE)));
            }
        }
    }
    Err(Error::NonConvergence {
        func: "hyp1f1",
        terms: HYP1F1_MAX_TERMS,
        tail: term.0.hi.hypot(term.1.hi),
    })
}

/// Unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    /// Exact a + b.
    fn sum(a: f64, b: f64) -> Dd {
        let (s, e) = two_sum(a, b);
        Dd { hi: s, lo: e }
    }
}

impl std::ops::Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let r = quick_two_sum(s, e + t);
        quick_two_sum(r.hi, r.lo + f)
    }
}

impl std::ops::Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + Dd { hi: -o.hi, lo: -o.lo }
    }
}

impl std::ops::Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi))
    }
}

impl std::ops::Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, o: f64) -> Dd {
        let p = self.hi * o;
        let e = self.hi.mul_add(o, -p);
        quick_two_sum(p, e + self.lo * o)
    }
}

impl std::ops::Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * q1;
        let q2 = r.hi / o.hi;
        let r = r - o * q2;
        let q3 = r.hi / o.hi;
        let q = quick_two_sum(q1, q2);
        q + Dd::from(q3)
    }
}

/// Sums Σ_k (p)_k (q)_k / k! · uᵏ up to its smallest term. Returns the sum,
/// the number of terms and the last term magnitude relative to the sum.
fn asymptotic_series(p: f64, q: f64, u: Complex64) -> Result<(Complex64, usize, f64)> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = ComplexSum::new();
    sum.add(term);
    let mut last = 1.0f64;
    for k in 0..ASYMPTOTIC_MAX_TERMS {
        let kf = k as f64;
        let next = term * u * ((p + kf) * (q + kf) / (kf + 1.0));
        let mag = next.norm();
        if mag == 0.0 {
            return Ok((sum.value(), k + 1, 0.0));
        }
        if mag > last {
            // divergence sets in; stop at the smallest term
            let rel = last / sum.value().norm();
            if rel > 1e-13 {
                return Err(Error::NonConvergence {
                    func: "hyp1f1",
                    terms: k + 1,
                    tail: rel,
                });
            }
            return Ok((sum.value(), k + 1, rel));
        }
        term = next;
        sum.add(term);
        last = mag;
        if mag <= REL_TOL * sum.value().norm() {
            return Ok((sum.value(), k + 2, mag / sum.value().norm()));
        }
    }
    Err(Error::NonConvergence {
        func: "hyp1f1",
        terms: ASYMPTOTIC_MAX_TERMS,
        tail: last,
    })
}

/// Large-|z| expansion for Re z ≥ 0, scaled by e^{-Re z}:
///
///   ₁F₁(a;c;z) ≈ Γ(c)/Γ(a) e^z z^{a-c} Σ (c-a)_k (1-a)_k / k! z^{-k}
///              + Γ(c)/Γ(c-a) (-z)^{-a} Σ (a)_k (a-c+1)_k / k! (-z)^{-k}
///
/// with principal branches throughout.
fn asymptotic_1f1(a: f64, c: f64, z: Complex64) -> Result<(Scaled, usize, f64)> {
    let inv = z.inv();
    let (s1, n1, t1) = asymptotic_series(c - a, 1.0 - a, inv)?;
    let dominant = Complex64::from_polar(1.0, z.im) * ((a - c) * z.ln()).exp() * s1 * gamma_ratio(c, a);

    let mut total = dominant;
    let mut terms = n1;
    let mut tail = t1;
    let second_coef = gamma(c) * recip_gamma(c - a);
    if second_coef != 0.0 {
        let (s2, n2, t2) = asymptotic_series(a, a - c + 1.0, -inv)?;
        let recessive = (-a * (-z).ln()).exp() * s2 * second_coef * (-z.re).exp();
        total += recessive;
        terms += n2;
        tail = tail.max(t2);
    }
    Ok((
        Scaled {
            mantissa: total,
            log_scale: z.re,
        },
        terms,
        tail,
    ))
}
