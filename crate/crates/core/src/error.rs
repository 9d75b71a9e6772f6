use thiserror::Error;

use crate::element::AlgebraDescriptor;

/// Errors raised by algebra operations, entropy formulas and the harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum JordanError {
    #[error("incompatible algebras: {left} vs {right}")]
    IncompatibleAlgebras {
        left: AlgebraDescriptor,
        right: AlgebraDescriptor,
    },

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("eigenvalue {eigenvalue:e} lies outside the domain of `{function}` ({bound})")]
    Domain {
        function: String,
        eigenvalue: f64,
        bound: String,
    },

    #[error("element is singular (min |eigenvalue| = {min_abs_eigenvalue:e})")]
    Singular { min_abs_eigenvalue: f64 },

    #[error("operand `{operand}` is not positive invertible (min eigenvalue = {min_eigenvalue:e})")]
    NotPositive { operand: String, min_eigenvalue: f64 },

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("sampler could not satisfy hypothesis: {0}")]
    Sampler(String),

    #[error("unknown identifier `{0}`")]
    UnknownId(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl JordanError {
    /// Short machine-readable tag, used for structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            JordanError::IncompatibleAlgebras { .. } => "incompatible-algebras",
            JordanError::InvalidElement(_) => "invalid-element",
            JordanError::Domain { .. } => "domain",
            JordanError::Singular { .. } => "singular",
            JordanError::NotPositive { .. } => "not-positive",
            JordanError::Parameter(_) => "parameter",
            JordanError::Consistency(_) => "consistency",
            JordanError::Sampler(_) => "sampler",
            JordanError::UnknownId(_) => "unknown-id",
            JordanError::Parse(_) => "parse",
        }
    }
}

pub type Result<T, E = JordanError> = std::result::Result<T, E>;
