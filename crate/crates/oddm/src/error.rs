use thiserror::Error;

/// Errors produced by signal construction and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A time offset does not land on the sample grid.
    #[error("offset {offset} s is not an integer multiple of the sample step {dt} s")]
    OffGrid { offset: f64, dt: f64 },

    /// Two signals do not share a common sample grid.
    #[error("signals are not grid-compatible: {0}")]
    GridMismatch(String),

    /// A parameter is outside its valid range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Matrix or frame dimensions do not match.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A sample or coefficient is NaN or infinite.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// Malformed serialized data.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
