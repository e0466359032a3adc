use thiserror::Error;

/// Errors raised by the algebra routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is neither 0 nor a prime")]
    InvalidCharacteristic(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(u64, u64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: u32, got: u32 },
    #[error("elements belong to different local algebras")]
    AlgebraMismatch,
    #[error("zero vector where a nonzero one is required")]
    ZeroVector,
    #[error("zero element where a nonzero one is required")]
    ZeroElement,
    #[error("input family is linearly dependent")]
    LinearlyDependent,
    #[error("sequence {0:?} is not disjoint in characteristic {1}")]
    NotDisjoint(Vec<u64>, u64),
    #[error("enumeration of {count} elements exceeds the guard {guard}")]
    EnumerationGuard { count: u128, guard: u128 },
    #[error("operation needs a finite field")]
    InfiniteField,
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
