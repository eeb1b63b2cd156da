use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument outside the domain of a function, e.g. `bracket(0)`.
    #[error("domain error: {0}")]
    Domain(String),
    /// A weight denominator vanished.
    #[error("pole: {0} vanishes")]
    Pole(String),
    /// Coincident arguments make a bialternant 0/0.
    #[error("confluent arguments: {0}")]
    Confluence(String),
    #[error("eigenvalue-1 space has dimension {dim}, expected 1")]
    Degenerate { dim: usize },
    #[error("eigenvector check failed: {0}")]
    Eigen(String),
    #[error("rejection budget of {budget} draws exhausted; violated predicate: {predicate}")]
    Sampling { predicate: String, budget: usize },
    #[error("size mismatch: {0}")]
    Size(String),
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
