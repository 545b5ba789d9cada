//! High-precision reference implementations used as test oracles.
//!
//! Everything here works in binary fixed point with [`FRAC_BITS`] fractional
//! bits (about 190 decimal digits), starting from the exact value of each
//! `f64` input. The routines are deliberately naive: plain series and
//! recurrences whose only job is to be obviously right.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const FRAC_BITS: usize = 640;

/// Fixed-point real number `value = raw / 2^FRAC_BITS`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn zero() -> Self {
        Fixed(BigInt::zero())
    }

    pub fn one() -> Self {
        Fixed(BigInt::one() << FRAC_BITS)
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Self {
        let r = BigRational::from_float(x).expect("finite input");
        Fixed((r.numer() << FRAC_BITS) / r.denom())
    }

    pub fn from_int(n: i64) -> Self {
        Fixed(BigInt::from(n) << FRAC_BITS)
    }

    pub fn to_f64(&self) -> f64 {
        BigRational::new(self.0.clone(), BigInt::one() << FRAC_BITS)
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> Self {
        Fixed(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl Add for &Fixed {
    type Output = Fixed;
    fn add(self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }
}

impl Sub for &Fixed {
    type Output = Fixed;
    fn sub(self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }
}

impl Mul for &Fixed {
    type Output = Fixed;
    fn mul(self, o: &Fixed) -> Fixed {
        Fixed((&self.0 * &o.0) >> FRAC_BITS)
    }
}

impl Div for &Fixed {
    type Output = Fixed;
    fn div(self, o: &Fixed) -> Fixed {
        Fixed((&self.0 << FRAC_BITS) / &o.0)
    }
}

impl Neg for &Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(-&self.0)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Fixed {
            type Output = Fixed;
            fn $f(self, o: Fixed) -> Fixed {
                (&self).$f(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

/// Complex number over [`Fixed`].
#[derive(Clone, Debug, PartialEq)]
pub struct FixedComplex {
    pub re: Fixed,
    pub im: Fixed,
}

impl FixedComplex {
    pub fn zero() -> Self {
        FixedComplex {
            re: Fixed::zero(),
            im: Fixed::zero(),
        }
    }

    pub fn one() -> Self {
        FixedComplex {
            re: Fixed::one(),
            im: Fixed::zero(),
        }
    }

    pub fn from_c64(z: Complex64) -> Self {
        FixedComplex {
            re: Fixed::from_f64(z.re),
            im: Fixed::from_f64(z.im),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(&self, o: &FixedComplex) -> FixedComplex {
        FixedComplex {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn mul(&self, o: &FixedComplex) -> FixedComplex {
        FixedComplex {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    pub fn scale(&self, s: &Fixed) -> FixedComplex {
        FixedComplex {
            re: &self.re * s,
            im: &self.im * s,
        }
    }

    /// Cheap magnitude estimate (|re| + |im|) as a double.
    pub fn norm1_f64(&self) -> f64 {
        self.re.to_f64().abs() + self.im.to_f64().abs()
    }
}

/// ₂F₁(-n, b; c; z) by its finite defining sum.
pub fn hyp2f1_terminating(n: usize, b: f64, c: f64, z: Complex64) -> Complex64 {
    let (b, c) = (Fixed::from_f64(b), Fixed::from_f64(c));
    let z = FixedComplex::from_c64(z);
    let mut term = FixedComplex::one();
    let mut sum = FixedComplex::one();
    for k in 0..n {
        let k_f = Fixed::from_int(k as i64);
        let num = &Fixed::from_int(k as i64 - n as i64) * &(&b + &k_f);
        let den = &(&c + &k_f) * &Fixed::from_int(k as i64 + 1);
        term = term.mul(&z).scale(&(&num / &den));
        sum = sum.add(&term);
    }
    sum.to_c64()
}

/// ₁F₁(a; c; z) by its Taylor series, summed until the terms drop below
/// 10⁻⁶⁰ of the running sum.
pub fn hyp1f1(a: f64, c: f64, z: Complex64) -> Complex64 {
    let (a, c) = (Fixed::from_f64(a), Fixed::from_f64(c));
    let r = z.norm();
    let z = FixedComplex::from_c64(z);
    let mut term = FixedComplex::one();
    let mut sum = FixedComplex::one();
    let mut k = 0i64;
    loop {
        let k_f = Fixed::from_int(k);
        let num = &a + &k_f;
        let den = &(&c + &k_f) * &Fixed::from_int(k + 1);
        term = term.mul(&z).scale(&(&num / &den));
        sum = sum.add(&term);
        k += 1;
        let t = term.norm1_f64();
        if t == 0.0 || (k as f64 > 2.0 * r && t < 1e-60 * sum.norm1_f64()) {
            break;
        }
    }
    sum.to_c64()
}

/// I_n(x) for integer order by its power series.
pub fn bessel_i_int(n: u32, x: f64) -> f64 {
    let half = Fixed::from_f64(x / 2.0);
    let q = &half * &half;
    let mut term = Fixed::one();
    for j in 1..=n {
        term = &(&term * &half) / &Fixed::from_int(j as i64);
    }
    let mut sum = term.clone();
    let mut k = 0i64;
    loop {
        term = &(&term * &q) / &Fixed::from_int((k + 1) * (k + 1 + n as i64));
        sum = &sum + &term;
        k += 1;
        if k as f64 > x && term.to_f64() < 1e-60 * sum.to_f64() {
            break;
        }
    }
    sum.to_f64()
}

/// Laguerre values L_0^{(ν)}(x), …, L_{n_max}^{(ν)}(x) from the three-term
/// recurrence carried in fixed point.
pub fn laguerre_table(n_max: usize, nu: f64, x: f64) -> Vec<Fixed> {
    let nu = Fixed::from_f64(nu);
    let x = Fixed::from_f64(x);
    let mut out = vec![Fixed::one()];
    if n_max == 0 {
        return out;
    }
    out.push(&(&Fixed::one() + &nu) - &x);
    for k in 1..n_max {
        let kf = Fixed::from_int(k as i64);
        let a = &(&(&Fixed::from_int(2 * k as i64 + 1) + &nu) - &x) * &out[k];
        let b = &(&kf + &nu) * &out[k - 1];
        out.push(&(&a - &b) / &Fixed::from_int(k as i64 + 1));
    }
    out
}

pub fn laguerre(n: usize, nu: f64, x: f64) -> f64 {
    laguerre_table(n, nu, x)[n].to_f64()
}

/// Γ(α) · Σ_{m<terms} τ^m m!/Γ(m+α) L_m^{(α-1)}(ξ) L_m^{(α-1)}(ζ), i.e. the
/// bilinear Laguerre series with the common 1/Γ(α) factored out.
pub fn bilinear_laguerre_sum(tau: f64, xi: f64, zeta: f64, alpha: f64, terms: usize) -> f64 {
    let lx = laguerre_table(terms, alpha - 1.0, xi);
    let lz = laguerre_table(terms, alpha - 1.0, zeta);
    let tau = Fixed::from_f64(tau);
    let alpha = Fixed::from_f64(alpha);
    let mut coef = Fixed::one();
    let mut sum = Fixed::zero();
    for m in 0..terms {
        sum = &sum + &(&coef * &(&lx[m] * &lz[m]));
        let mf = Fixed::from_int(m as i64);
        coef = &(&coef * &tau) * &(&Fixed::from_int(m as i64 + 1) / &(&mf + &alpha));
    }
    sum.to_f64()
}

/// [`bilinear_laguerre_sum`] truncated where the a-priori bound
/// |L_m^{(ν)}(x)| ≤ (ν+1)_m/m! e^{x/2} puts the remaining tail below 10⁻¹⁴ of
/// the smallest value the full sum can take, (1-τ)^{-α} e^{-τ(ξ+ζ)/(1-τ)}.
/// Requires α ≥ 1.
pub fn bilinear_laguerre_converged(tau: f64, xi: f64, zeta: f64, alpha: f64) -> f64 {
    let ln_floor = -alpha * (1.0 - tau).ln() - tau * (xi + zeta) / (1.0 - tau)
        - 14.0 * std::f64::consts::LN_10;
    let ln_growth = 0.5 * (xi + zeta);
    // term bound τ^m (α)_m/m! e^{(ξ+ζ)/2}; the tail is at most 1/(1-τ') times it
    let mut ln_term = ln_growth;
    let mut m = 0usize;
    loop {
        let ratio = tau * (alpha + m as f64) / (m as f64 + 1.0);
        ln_term += ratio.ln();
        m += 1;
        if m >= 200 && ratio < 1.0 && ln_term - (1.0 - ratio).ln() < ln_floor {
            break;
        }
    }
    bilinear_laguerre_sum(tau, xi, zeta, alpha, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_round_trip() {
        for &x in &[0.0, 1.0, -2.5, 1e-30, 3.7e25, std::f64::consts::PI] {
            assert_eq!(Fixed::from_f64(x).to_f64(), x);
        }
        let third = &Fixed::one() / &Fixed::from_int(3);
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-17);
    }

    #[test]
    fn exponential_series() {
        let z = Complex64::new(1.5, -0.5);
        let v = hyp1f1(2.0, 2.0, z);
        assert!((v - z.exp()).norm() < 1e-15 * v.norm());
    }

    #[test]
    fn bessel_small_order() {
        // I_0(1) = 1.2660658777520083355982446
        assert!((bessel_i_int(0, 1.0) - 1.266_065_877_752_008_3).abs() < 1e-15);
    }

    #[test]
    fn laguerre_known_value() {
        assert!((laguerre(5, 1.5, 2.3) + 0.515_480_666_666_666_67).abs() < 1e-15);
    }
}
