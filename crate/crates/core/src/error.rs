use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("truth table has {got} entries, expected 2^{n} = {expected}")]
    LengthMismatch { n: usize, expected: usize, got: usize },

    #[error("entry {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },

    #[error("dimension {n} outside the supported range {min}..={max}")]
    DimensionOutOfRange { n: usize, min: usize, max: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("level profile is not the profile of a function: Σ W_m = {total} < sup = {sup}")]
    NotAFunctionProfile { total: f64, sup: f64 },

    #[error("threshold parity violated: N - alpha = {n} - {alpha} must be odd")]
    ParityViolation { n: usize, alpha: i64 },

    #[error("function has degree {degree}, above the declared bound {bound}")]
    DegreeExceeded { degree: usize, bound: usize },

    #[error("sup norm {sup} exceeds 1")]
    SupNormAboveOne { sup: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("numerical invariant violated: {0}")]
    Numerical(String),

    #[error("malformed input: {0}")]
    Input(String),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
