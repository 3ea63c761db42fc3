use crate::types::Domain;

/// Errors produced by point-set construction and Lebesgue computations.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("cannot combine a real matrix with a complex matrix")]
    ScalarKind,
    #[error("length mismatch: expected {expected}, got {actual}")]
    Length { expected: usize, actual: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("matrix is numerically singular")]
    Singular,
    #[error("not a Hadamard matrix: {0}")]
    InvalidHadamard(String),
    #[error("Hadamard matrix is not normalized (first row and column must be all +1)")]
    NotNormalized,
    #[error("operation not supported for the {0} domain")]
    UnsupportedDomain(Domain),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::Length { expected, actual })
    }
}
