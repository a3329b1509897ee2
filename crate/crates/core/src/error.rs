use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("direction is not a unit vector (norm {norm})")]
    NonUnitDirection { norm: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("ball intersection is empty (feasibility residual {residual:e})")]
    EmptyIntersection { residual: f64 },

    #[error("solver did not converge within {iterations} iterations (gap {gap:e})")]
    MaxIterations { iterations: usize, gap: f64 },

    #[error("body is not of constant width (spread {spread:e})")]
    NotConstantWidth { spread: f64 },

    #[error("pair is not of constant relative width (spread {spread:e})")]
    NotConstantRelativeWidth { spread: f64 },

    #[error("fiber mismatch: {0}")]
    FiberMismatch(String),

    #[error("invalid bound: {0}")]
    InvalidBound(String),

    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub(crate) fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
