use thiserror::Error;

/// Crate-wide error type.
///
/// Variants split into user-facing input problems and internal invariant
/// violations; [`Error::is_internal`] tells them apart.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix is not totally unimodular")]
    NotTotallyUnimodular,
    #[error("vector is not in the lattice: {0}")]
    NotInLattice(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("no integer step size in the admissible interval [{lo}, {hi}]")]
    StepSize { lo: String, hi: String },
    #[error("oracle failure: {0}")]
    Oracle(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Invariant(_) | Error::Oracle(_) | Error::Overflow(_) | Error::StepSize { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
