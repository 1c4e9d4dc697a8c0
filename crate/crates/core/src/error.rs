use thiserror::Error;

/// Errors produced by construction and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ball of {kind} at radius {radius} has {size} elements, exceeding the cap {cap}")]
    BallCapExceeded {
        kind: String,
        radius: u32,
        size: usize,
        cap: usize,
    },

    #[error("vectors are indexed by different balls")]
    BallMismatch,

    #[error("element does not belong to the ball's group: {0}")]
    ElementMismatch(String),

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("dimension mismatch: operator expects {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operator does not act on this space: {0}")]
    IncompatibleOperator(String),

    #[error("invalid cayley table: {0}")]
    InvalidCayleyTable(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error(
        "base matrix is not orthogonal: max |B^T B - I| = {defect:.3e} exceeds {tolerance:.3e}"
    )]
    NotOrthogonal { defect: f64, tolerance: f64 },

    #[error("exponent {k} is not primitive modulo {modulus} (gcd is {gcd})")]
    NotPrimitive { k: i64, modulus: i64, gcd: i64 },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("operator does not have finite order: {0}")]
    NotFiniteOrder(String),

    #[error("eigenspace projections fail to reconstruct the identity: residual {residual:.3e}")]
    DefectiveDecomposition { residual: f64 },

    #[error("integer overflow in exact angle arithmetic")]
    AngleOverflow,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed input document: {0}")]
    MalformedInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
