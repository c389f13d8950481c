use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix does not have full row rank")]
    NotFullRowRank,
    #[error("factor index {index} out of range for an order-{order} tensor")]
    BadFactorIndex { index: usize, order: usize },
    #[error("vector length {len} does not match a {rows}x{cols} matrix")]
    LengthMismatch { len: usize, rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("basis-change matrix for factor {factor} is singular")]
    SingularFactorMatrix { factor: usize },
    #[error("the zero tensor has no concise core")]
    ZeroTensor,
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("inconsistent Kronecker invariants; this signals an internal bug")]
    InconsistentInvariants,
    #[error("pencil has a zero minimal index; the rank formula applies only to pencils concise in both non-parameter factors")]
    NotConcisePencil,
    #[error("operation requires a concise tensor")]
    NotConciseInput,
    #[error("shape {shape:?} is not compatible with family {family}")]
    IncompatibleShape { family: char, shape: Vec<usize> },
}

pub type Result<T> = std::result::Result<T, Error>;
