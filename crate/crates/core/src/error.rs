//! Error type shared across the engine.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text (coefficients, field tags, JSON payloads).
    #[error("parse error: {0}")]
    Parse(String),

    /// Invalid exact arithmetic (division by zero, bad modular reduction).
    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    /// A structural precondition of an operation failed (unknown basis
    /// label, inhomogeneous element, wrong field, non-commutative input...).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// An operation would need tensor words longer than the truncation
    /// window it was given.
    #[error("truncation overflow: {0}")]
    TruncationOverflow(String),

    /// A homology window request that the engine cannot certify as exact.
    #[error("window not certified: {0}")]
    WindowNotCertified(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
