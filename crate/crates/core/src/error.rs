use thiserror::Error;

/// Errors produced by the numerical routines and the symbol parser.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("parameter out of domain for `{family}`: {msg}")]
    Parameter { family: String, msg: String },

    #[error("integration did not converge: {0}")]
    Integrability(String),

    #[error("symbol is not real-valued at v = {v}: imaginary part {imag}")]
    NotRealValued { v: f64, imag: f64 },

    #[error("symbol is not non-negative: a({v}) = {value}")]
    NotNonNegative { v: f64, value: f64 },

    #[error("closed form not available: {0}")]
    NotAvailable(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
