use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// An argument violates a structural precondition (counts, sizes, enums).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An exact integer result does not fit in 128 bits.
    #[error("integer overflow computing {0}")]
    Overflow(String),

    /// An iterative method did not meet its tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The dense symmetric eigensolver failed on one degree block.
    #[error("eigensolver failed to converge on degree block l = {block}")]
    Eigen { block: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {x}")))
    }
}

pub(crate) fn ensure_dimension(d: u32) -> Result<()> {
    if d >= 2 {
        Ok(())
    } else {
        Err(Error::Domain(format!("dimension d must be >= 2, got {d}")))
    }
}
