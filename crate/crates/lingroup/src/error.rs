//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field descriptor mismatch: {0}")]
    DescriptorMismatch(String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("singular generator at index {0}")]
    SingularGenerator(usize),
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("polynomial is reducible: found factor {0}")]
    ReduciblePolynomial(String),
    #[error("subspace not invariant under generator {index}")]
    NotInvariant { index: usize },
    #[error("image too large for enumeration: cap {cap} reached")]
    ImageTooLarge { cap: usize, partial: usize },
    #[error("W-homomorphism unavailable: {0}")]
    WHomUnavailable(String),
    #[error("congruence certificate violation: {0}")]
    CertificateViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
