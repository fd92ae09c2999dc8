use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid rational literal {0:?}")]
    ParseRational(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("algebra is not Azumaya: enveloping map has rank {rank}, expected {expected}")]
    NotAzumaya { rank: usize, expected: usize },
    #[error("no projective basis found: {0}")]
    NoProjectiveBasis(String),
    #[error("inconsistent anchor/counit data: {0}")]
    InconsistentAnchor(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(context: &str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context: context.to_string(),
            expected,
            found,
        })
    }
}
