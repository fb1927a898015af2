use thiserror::Error;

/// Errors raised while building or analysing a group.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("resource limit: {what} needs {needed} elements, budget is {budget}")]
    Resource { what: String, needed: u64, budget: u64 },
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("rank error: G/Phi(G) has order {index}, a 2-generator group needs {expected}")]
    Rank { index: u64, expected: u64 },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("ill-ordered relation at line {line}: {message}")]
    IllOrdered { line: usize, message: String },
    #[error("collection diverged after {0} rewriting steps")]
    Divergence(u64),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("group of order {order} exceeds the exhaustive threshold {threshold}")]
    Threshold { order: u64, threshold: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
