use thiserror::Error;

/// Errors produced by the solvers in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// The input violates a documented precondition (non-finite entries,
    /// negative weights, empty or mismatched vectors, bad tolerances).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// An internal guarantee failed. The multiplier search is exhaustive over
    /// a finite candidate list and must succeed for every valid input, so
    /// hitting this variant indicates a bug, not a property of the data.
    #[error("contract violation: {0}")]
    ContractViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
