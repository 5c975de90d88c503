use thiserror::Error;

/// Errors raised by graph ingestion, construction and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Domain(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("unsupported shape: {0}")]
    Shape(String),

    #[error("resource cap exceeded in degree {degree}: {count} generators > cap {cap}")]
    Resource { degree: usize, count: usize, cap: usize },

    #[error("refused: {0}")]
    Refused(String),

    #[error("degree {degree} outside trusted range (max {max})")]
    Range { degree: usize, max: usize },

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("selection is not a subcomplex: {0}")]
    Subcomplex(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Domain(_) => "domain",
            Error::InvalidMap(_) => "invalid_map",
            Error::Shape(_) => "shape",
            Error::Resource { .. } => "resource",
            Error::Refused(_) => "refused",
            Error::Range { .. } => "range",
            Error::RingMismatch(_) => "ring_mismatch",
            Error::Dimension(_) => "dimension",
            Error::Subcomplex(_) => "subcomplex",
            Error::Precondition(_) => "precondition",
            Error::Verification(_) => "verification",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
