//! Error type shared by all modules of the crate.

use thiserror::Error;

use crate::protocol::Scheme;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Returned when an amplitude vector cannot be normalized.
    #[error("amplitude vector has (near-)zero norm: |psi|^2 = {norm_sq:.3e}")]
    ZeroNorm { norm_sq: f64 },

    /// Returned when a pure-state invariant is violated beyond tolerance.
    #[error("invalid pure state: {0}")]
    InvalidState(String),

    /// Returned when a density-matrix invariant is violated beyond tolerance.
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    /// Returned when a probability distribution is malformed.
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    /// Returned when a path index does not address a valid path.
    #[error("path index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    /// Returned when a pair rotation is requested with k = l.
    #[error("rotation indices must differ, got k = l = {0}")]
    EqualIndices(usize),

    /// Returned when a pair rotation is requested with k > l.
    #[error("pair indices must satisfy k < l, got ({k}, {l})")]
    UnorderedPair { k: usize, l: usize },

    /// Returned when composed pairs share a path index.
    #[error("path index {index} appears in more than one pair")]
    OverlappingPairs { index: usize },

    /// Returned when rotations of both kinds are mixed in one composition.
    #[error("cannot compose rotations of different kinds")]
    MixedKinds,

    /// Returned when operand dimensions disagree.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// Returned when a measurement plan is requested for d < 2.
    #[error("measurement plan requires dimension >= 2, got {0}")]
    DimensionTooSmall(usize),

    /// Returned when results lack a setup required by the plan.
    #[error("results are missing setup {0:?}")]
    MissingSetup(String),

    /// Returned when results contain a setup more than once.
    #[error("results contain setup {0:?} more than once")]
    DuplicateSetup(String),

    /// Returned when results contain a setup the plan does not know.
    #[error("results contain setup {0:?} not present in the plan")]
    UnexpectedSetup(String),

    /// Returned when an operation is applied to statistics of the wrong scheme.
    #[error("operation requires the {expected} scheme, got {actual}")]
    WrongScheme { expected: Scheme, actual: Scheme },

    /// Returned when an optical setup cannot be compiled or multiplied out.
    #[error("invalid setup: {0}")]
    InvalidSetup(String),

    /// Returned when a mixed-state rank is outside 1..=dim.
    #[error("rank {rank} invalid for dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },

    /// Returned when a state or record file cannot be parsed.
    #[error("malformed file: {0}")]
    MalformedFile(String),
}
