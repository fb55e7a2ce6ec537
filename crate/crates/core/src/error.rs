//! Error taxonomy shared by every module.
//!
//! Each error falls in one of three classes: the input is malformed, the
//! mathematics rejects the request, or an identity that must hold failed.

use thiserror::Error;

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Rejected,
    Internal,
}

#[derive(Debug, Error, Clone)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("chart mismatch: `{0}` vs `{1}`")]
    ChartMismatch(String, String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("pole at point: {0}")]
    Pole(String),
    #[error("not a contact form: {0}")]
    NotContact(String),
    #[error("singular linear system; degeneracy polynomial {0}")]
    Singular(String),
    #[error("not Hamiltonian: {0}")]
    NotHamiltonian(String),
    #[error("rejected: {0}")]
    Rejected(String),
    #[error("identity violation: {0}")]
    IdentityViolation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Syntax { .. }
            | Error::UnknownIdentifier(_)
            | Error::InvalidChart(_)
            | Error::ChartMismatch(..)
            | Error::Invalid(_)
            | Error::Schema { .. } => ErrorClass::Input,
            Error::IdentityViolation(_) => ErrorClass::Internal,
            _ => ErrorClass::Rejected,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
