//! Error type shared across the engine.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The operator pair cannot be assembled into a valid system.
    #[error("invalid system: {0}")]
    InvalidSystem(String),

    /// A series is truncated too short for the requested application.
    #[error("series order {available} leaves no reliable coefficients (need more than {required})")]
    TruncationTooShort { required: u32, available: u32 },

    /// Reducing a matrix row needs more leading-coefficient factors than the
    /// current budget N provides; the caller must raise N.
    #[error("row reduction consumed L^{needed}, exceeding the budget N = {budget}")]
    PowerExceedsBudget { needed: u32, budget: u32 },

    /// Search exhausted every N up to the cap without finding a kernel.
    #[error("no nontrivial kernel found for any N <= {n_max}")]
    NoKernelWithinBudget { n_max: u32 },

    /// Unknown sample-system name.
    #[error("unknown sample system `{0}` (expected geometric, exp, or sqrt)")]
    UnknownSystem(String),

    /// A serialized object does not match the expected wire shape.
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
