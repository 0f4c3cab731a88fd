use thiserror::Error;

/// Errors raised by the stability toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero functional has no primitive integer multiple")]
    ZeroFunctional,

    #[error("point set is empty")]
    EmptySet,

    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(i64),

    #[error("mod directions are linearly dependent")]
    DependentDirections,

    #[error("point is contained in the hull; no separating functional exists")]
    PointContained,

    #[error("one-parameter subgroup {0} violates the problem constraints")]
    Inadmissible(String),

    #[error("invalid stability problem: {0}")]
    InvalidProblem(String),

    #[error("invalid weighted vector: {0}")]
    InvalidVector(String),

    #[error("pair is not semistable")]
    NotSemistable,

    #[error("character {0} is not in the support of v")]
    NotInSupport(String),

    #[error("B is not a subset of A")]
    NotSubset,

    #[error("B is not a limit support of A")]
    NotLimitSupport,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular matrix")]
    SingularMatrix,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("inconsistent variety datum: {0}")]
    InvalidVariety(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
