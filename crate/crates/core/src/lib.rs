//! Generalized phase coherent states built from circular Jacobi polynomials
//! over the pseudoharmonic-oscillator eigenbasis.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`] – Γ, Pochhammer, ₂F₁, ₁F₁, Laguerre, modified Bessel and the
//!   Hille–Hardy kernel.
//! * [`quadrature`] – circle and half-line rules.
//! * [`pho`] – oscillator spectrum and orthonormal eigenbasis.
//! * [`cjacobi`] – circular Jacobi polynomials and their weight.
//! * [`gpcs`] – the coherent states: coefficients, normalization, wavefunctions.
//! * [`identity`] – the damped resolution-of-identity operator.
//! * [`transform`] – the coherent-state transform onto the circle.
//! * [`verify`] – named verification suites producing [`report::VerificationReport`]s.

pub mod cjacobi;
pub mod error;
pub mod gpcs;
pub mod identity;
pub mod pho;
pub mod quadrature;
pub mod report;
pub mod specfun;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
