use thiserror::Error;

/// Errors raised by the algebra kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("substitution image {index} has nonzero constant term")]
    DivergentSubstitution { index: usize },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("generator index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("image {index} has nonzero constant term")]
    NonzeroConstantTerm { index: usize },
    #[error("linear part is singular")]
    SingularLinearPart,
    #[error("derivation is not nilpotent at truncation: {0}")]
    NonNilpotentAtTruncation(String),
    #[error("enumeration cap exceeded: {needed} > {cap}")]
    CapExceeded { needed: usize, cap: usize },
    #[error("relation {index} has nonzero constant term; recenter before calling")]
    NonRecentred { index: usize },
    #[error("relations are not smooth at the origin: abelianized linear parts are dependent")]
    NotSmooth,
    #[error("malformed GK form: {0}")]
    MalformedGk(String),
    #[error("Jacobian of base change is singular at the origin")]
    SingularJacobian,
    #[error("invalid gauge: {0}")]
    InvalidGauge(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
