use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The Buchberger pair queue outgrew the configured cap.
    #[error("resource limit: pair queue reached {pairs} (cap {cap})")]
    ResourceLimit { pairs: usize, cap: usize },

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("shape violation: {0}")]
    ShapeViolation(String),

    /// An internal consistency check failed; indicates a bug or a bad input
    /// that slipped past validation.
    #[error("inconsistent: {0}")]
    Inconsistent(String),

    #[error("enumeration bound exceeded: {0}")]
    Bound(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
