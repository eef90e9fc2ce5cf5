use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A vector length that must be a power of two is not.
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    /// An index (level, frequency, translation) outside its valid range.
    #[error("{what} {value} out of range [{lo}, {hi}]")]
    IndexOutOfRange {
        what: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },

    /// Two objects that must share a dimension do not.
    #[error("size mismatch: {what} ({left} vs {right})")]
    SizeMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },

    /// A scalar or structural parameter violates its contract.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested computation exceeds a configured size/work cap.
    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),

    /// An iterative routine failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
