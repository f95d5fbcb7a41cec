use thiserror::Error;

/// Errors raised by the simulator and its analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("amplitude vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("density matrix trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NegativeEigenvalue(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("measurement basis is not orthonormal and complete: {0}")]
    InvalidBasis(String),

    #[error("outcome probabilities sum to {0}, expected 1")]
    ProbabilitySum(f64),

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("k = {k} outside the supported range 1..={max}")]
    KOutOfRange { k: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("outcome {outcome:?} does not belong to the {basis:?} basis")]
    OutcomeNotInBasis {
        outcome: crate::protocol::SargSymbol,
        basis: crate::protocol::Basis,
    },

    #[error("Alice knows no bit of the final key")]
    EmptyKnownSet,

    #[error("no known bit after {attempts} attempts")]
    RestartLimitExceeded { attempts: usize },

    #[error("strategy combination not supported: {0}")]
    UnsupportedStrategy(String),

    #[error("report serialization failed: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
