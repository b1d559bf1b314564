use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands live in rings instantiated at different `m`.
    #[error("ring mismatch: m = {left} vs m = {right}")]
    RingMismatch { left: u32, right: u32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("exponent overflow")]
    ExponentOverflow,

    /// Input outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series coefficient was requested outside the window where it is known exactly.
    #[error("truncation error: exponent {exponent} lies below the exact window starting at {window_start}")]
    Truncation { exponent: i64, window_start: i64 },

    /// A structural property the algorithm relies on did not hold.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("degenerate case: {0}")]
    Degenerate(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Validates the system parameter: `m > 3` and `3 ∤ m`.
pub fn check_m(m: u32) -> Result<()> {
    if m <= 3 || m.is_multiple_of(3) {
        Err(Error::Domain(format!(
            "invalid m = {m}: the system requires 3∤m>3"
        )))
    } else {
        Ok(())
    }
}
