//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by model construction and the numeric operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An input table violates a probability invariant (negative entry,
    /// non-normalized row, non-finite value).
    #[error("validation error: {0}")]
    Validation(String),
    /// Mismatched table sizes.
    #[error("dimension error: {0}")]
    Dimension(String),
    /// A scalar argument is outside its documented range.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested combination of inputs cannot occur for any valid model.
    #[error("infeasible input: {0}")]
    Infeasible(String),
    /// A configured resource limit was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// Malformed model or record file.
    #[error("parse error: {0}")]
    Parse(String),
    /// An internal invariant failed; indicates a bug, not a valid state.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
