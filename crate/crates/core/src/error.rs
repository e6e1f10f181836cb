use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A requested size exceeds a configured budget.
    #[error("capacity exceeded: {what} requires {requested}, limit is {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    /// Input data is not consistent with any valid object (e.g. power sums
    /// that are not those of a probability spectrum).
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("reconstruction failed: {0}")]
    Reconstruction(String),
}

pub type Result<T> = core::result::Result<T, Error>;
