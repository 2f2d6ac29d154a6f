use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("variable count mismatch: expected {expected}, found {found}")]
    VarCountMismatch { expected: usize, found: usize },
    #[error("substitution needs {expected} images, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("rank {rank} exceeds ambient dimension {ambient}")]
    RankExceedsAmbient { rank: usize, ambient: usize },
    #[error("input polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("vector is not a unit vector")]
    NotUnit,
    #[error("input failed verification: {0}")]
    Unverified(String),
    #[error("degenerate class: |trace| = {0} <= 2")]
    Degenerate(f64),
    #[error("field lacks an imaginary unit; use Gaussian rational coefficients")]
    NeedsComplex,
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;
