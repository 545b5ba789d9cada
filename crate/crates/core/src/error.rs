use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    #[error("{func} did not converge within {terms} terms (tail estimate {tail:e})")]
    NonConvergence {
        func: &'static str,
        terms: usize,
        tail: f64,
    },

    #[error("overflow in {func}; use the log-scale variant")]
    Overflow { func: &'static str },

    #[error("truncation at n_max = {n_max} leaves tail bound {tail:e}; use n_max >= {suggested}")]
    Truncation {
        n_max: usize,
        tail: f64,
        suggested: usize,
    },

    #[error("non-finite integrand at node {index} (x = {x})")]
    NonFinite { index: usize, x: f64 },

    #[error("invalid parameter `{name}`: {msg}")]
    InvalidParam { name: &'static str, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Error {
    Error::Domain {
        func,
        msg: msg.into(),
    }
}
