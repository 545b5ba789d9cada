//! Scalar special-function kernels.
//!
//! Every routine here is a pure function of its arguments. Infinite series are
//! summed with compensated (Neumaier) summation and report a tail bound
//! through [`SeriesResult`].

mod bessel;
mod gamma;
pub(crate) mod hypergeometric;
mod kernel;
mod laguerre;
mod sum;

pub use bessel::{bessel_i, bessel_i_reduced, bessel_i_scaled, ln_bessel_i, ln_bessel_i_reduced};
pub use gamma::{
    digamma, gamma, ln_gamma, log_gamma, log_pochhammer, pochhammer, recip_gamma,
};
pub use hypergeometric::{
    hyp1f1, hyp1f1_scaled, hyp2f1, hyp2f1_series, hyp2f1_terminating, Scaled,
    HYP1F1_MAX_TERMS, HYP1F1_SERIES_RADIUS,
};
pub use kernel::{hille_hardy_kernel, ln_hille_hardy_kernel};
pub use laguerre::laguerre;
pub use sum::{ComplexSum, KahanSum};

use num_complex::Complex64;

/// Value of a truncated infinite series together with its truncation
/// bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: Complex64,
    pub terms_used: usize,
    /// Upper estimate of the absolute value of the omitted tail.
    pub tail_bound: f64,
}

impl SeriesResult {
    pub fn real(value: f64, terms_used: usize, tail_bound: f64) -> Self {
        SeriesResult {
            value: Complex64::new(value, 0.0),
            terms_used,
            tail_bound,
        }
    }
}

/// Geometric tail estimate: `next / (1 - ratio)` where `ratio` bounds every
/// later term ratio. With `ratio <= 1/2` this is at most twice the first
/// omitted term.
pub(crate) fn geometric_tail(next: f64, ratio: f64) -> f64 {
    if ratio >= 1.0 {
        f64::INFINITY
    } else {
        next.abs() / (1.0 - ratio)
    }
}
