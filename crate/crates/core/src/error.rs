//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("matrix must be nonzero")]
    ZeroMatrix,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("subspace is not invariant: image of basis column {column} leaves the span")]
    NotInvariant { column: usize },
    #[error("basis is not saturated: image of basis column {column} has non-integer coordinates")]
    NotSaturated { column: usize },
    #[error("matrix has a negative entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },
    #[error("vector must be entrywise positive")]
    NotPositive,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("root isolation did not reach the requested precision (achieved radius {achieved:e})")]
    PrecisionUnachieved { achieved: f64 },
    #[error("no integer factor verified around the isolated root; increase the root precision")]
    FactorNotFound,
    #[error("insufficient fixed-point precision: {required_bits} bits required, {available_bits} available")]
    PrecisionShortfall { required_bits: u64, available_bits: u64 },
    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),
    #[error("family parameters violate {0}")]
    FamilyConstraint(String),
    #[error("substitution power would produce a word of length {length} (cap {cap})")]
    WordLengthCap { length: u128, cap: u64 },
    #[error("substitution is not primitive")]
    NotPrimitive,
    #[error("matrix is not degenerate for ratio order {k}")]
    NotDegenerate { k: u64 },
    #[error("invalid clearing at entry ({row}, {col}): {reason}")]
    ClearingInvalid { row: usize, col: usize, reason: String },
    #[error("majorant violated at grid point {point:?}: cleared gram {gram} exceeds majorant {majorant}")]
    GridViolation { point: Vec<f64>, gram: f64, majorant: f64 },
    #[error("vector does not lie in the required subspace")]
    NotInSubspace,
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by a broken invariant.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
