use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("basis index {n} lies outside the window [{lo}, {hi}]")]
    IndexOutOfWindow { n: i64, lo: i64, hi: i64 },

    #[error(
        "coherent-state tail weight {tail:e} exceeds threshold {threshold:e}; enlarge the window"
    )]
    TailTooLarge { tail: f64, threshold: f64 },

    #[error("operands live on different spaces: {left} vs {right}")]
    SpaceMismatch { left: String, right: String },

    #[error("polarization swap needs a symmetric window (lo = -(hi+1)), got [{lo}, {hi}]")]
    AsymmetricWindow { lo: i64, hi: i64 },

    #[error("eigendecomposition requires a cyclic-boundary Susskind-Glogower matrix")]
    NotCyclic,

    #[error("state is not normalized: squared norm {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("operator {label} is not Hermitian (max |A - A^dagger| = {deviation:e})")]
    NotHermitian { label: String, deviation: f64 },

    #[error("phase grids differ: {0}")]
    GridMismatch(String),

    #[error("operation requires a {expected} space")]
    WrongSpace { expected: &'static str },

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("bad state spec {spec:?}: {reason}")]
    StateSpec { spec: String, reason: String },

    #[error("unknown operator {0:?}")]
    UnknownOperator(String),

    #[error("bad complex literal {0:?}; expected a+bi or a-bi")]
    ComplexLiteral(String),
}

pub type Result<T> = std::result::Result<T, Error>;
