//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QkError {
    #[error("series is not invertible: leading coefficient is zero")]
    NotInvertible,

    #[error("coefficient at exponent {0} is not an integer: not p-integral")]
    NotIntegral(String),

    #[error("exponent grid mismatch: {0}")]
    GridMismatch(String),

    #[error("index out of range: {0}")]
    IndexRange(String),

    #[error("series truncation too short: need coefficients through exponent {need}, have through {have}")]
    TruncationTooShort { need: String, have: String },

    #[error("series not in span of the given basis")]
    NotInSpan,

    #[error("unsupported prime {0} for this operation")]
    UnsupportedPrime(u64),

    #[error("unsupported weight {k} at level {p}")]
    UnsupportedWeight { p: u64, k: u32 },

    #[error("vector is not modular: {0}")]
    NotModular(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
