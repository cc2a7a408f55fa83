use crate::exact::ExactError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LieError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("scalar arithmetic: {0}")]
    Scalar(#[from] ExactError),
    #[error("no solution found: {0}")]
    NoSolutionFound(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
