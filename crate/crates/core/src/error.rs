use alloc::string::String;
use core::fmt;

/// Errors raised by simulator operations.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Argument validation failed (bad sizes, malformed bit strings, ...).
    InvalidArgument(String),
    /// Qubit index out of range for the state size.
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    /// Two states (or a state and an operator) have different dimensions.
    DimensionMismatch { left: usize, right: usize },
    /// A state failed the normalization invariant.
    NotNormalized { norm_sqr: f64 },
    /// Forced projection onto a branch of negligible probability.
    DegenerateBranch { probability: f64 },
    /// Pulse output leaked outside its expected support.
    ProtocolFailure { leaked_probability: f64 },
    /// Dense-oracle request above the supported size.
    OracleScaleExceeded { n_qubits: usize, max: usize },
    /// A matrix expected to be Hermitian was not.
    NonHermitian { max_deviation: f64 },
    /// A computed propagator failed its unitarity check.
    UnitarityViolation { max_deviation: f64 },
    /// A constant derivation failed to reach its acceptance score.
    DerivationFailure(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::QubitOutOfRange { qubit, n_qubits } => {
                write!(f, "qubit {qubit} out of range for {n_qubits}-qubit state")
            }
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::NotNormalized { norm_sqr } => {
                write!(f, "state not normalized: |psi|^2 = {norm_sqr}")
            }
            Error::DegenerateBranch { probability } => {
                write!(f, "projection onto branch of probability {probability}")
            }
            Error::ProtocolFailure { leaked_probability } => {
                write!(f, "pulse output leaked probability {leaked_probability} outside expected support")
            }
            Error::OracleScaleExceeded { n_qubits, max } => {
                write!(f, "oracle limited to {max} qubits, got {n_qubits}")
            }
            Error::NonHermitian { max_deviation } => {
                write!(f, "matrix is not Hermitian (max deviation {max_deviation})")
            }
            Error::UnitarityViolation { max_deviation } => {
                write!(f, "propagator failed unitarity check (max deviation {max_deviation})")
            }
            Error::DerivationFailure(msg) => write!(f, "constant derivation failed: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
