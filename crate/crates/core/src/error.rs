use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 1, got {0}")]
    ZeroDimension(usize),

    #[error("spin must be a non-negative half-integer, got {0}")]
    InvalidSpin(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("expected {expected} coefficients, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("operands were built for different Hilbert-space parameters")]
    ParamsMismatch,

    #[error("state is not normalized: norm^2 = {0}")]
    NotNormalized(f64),

    #[error("matrix is not hermitian: deviation {0:e}")]
    NotHermitian(f64),

    #[error("trace must be 1, got {0}")]
    TraceNotOne(f64),

    #[error("matrix is not positive semidefinite: smallest eigenvalue {0:e}")]
    NotPositive(f64),

    #[error("mixture weights must be non-negative and sum to 1 ({0})")]
    InvalidWeights(String),

    #[error("harmonic e^(i{order}phi) shifts by a full cell or more (N = {dim})")]
    HarmonicOutOfRange { order: i64, dim: usize },

    #[error("rotation axis must have unit norm, got |n| = {0}")]
    AxisNotUnit(f64),

    #[error("Wigner weight has imaginary part {0:e}")]
    ComplexWeight(f64),

    #[error("multipole coefficients need lmax >= {required}, got {actual}")]
    InsufficientBand { required: usize, actual: usize },

    #[error("coefficients lie outside the image of the averaging map: relative residual {0:e}")]
    OutsideImage(f64),

    #[error("malformed input: {0}")]
    Schema(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
