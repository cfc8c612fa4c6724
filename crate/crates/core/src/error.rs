use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the estimation routines.
///
/// Row and column indices are zero-based; `Display` renders them one-based.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A system recorded two identical lifetimes, which would yield a zero spacing.
    DuplicateLifetime {
        row: usize,
        col: usize,
    },
    NonPositiveLifetime {
        row: usize,
        col: usize,
        value: f64,
    },
    NonPositiveSpacing {
        row: usize,
        col: usize,
        value: f64,
    },
    NonFiniteValue {
        row: usize,
        col: usize,
    },
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    EmptyData,
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// The model specification violates `k >= 2` or `2 <= s <= k-1`.
    InvalidModel(&'static str),
    InvalidParams(&'static str),
    /// An operation defined for one model was called with the other.
    ModelMismatch,
    InvalidSampleSize {
        n: usize,
        min: usize,
    },
    InvalidConfig(&'static str),
    /// The iterative maximizer hit its sweep limit before the relative change fell below tolerance.
    NoConvergence {
        sweeps: usize,
        change: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DuplicateLifetime { row, col } => write!(
                f,
                "duplicate lifetime at row {}, column {} (tied failure times give a zero spacing)",
                row + 1,
                col + 1
            ),
            Error::NonPositiveLifetime { row, col, value } => write!(
                f,
                "non-positive lifetime {value} at row {}, column {}",
                row + 1,
                col + 1
            ),
            Error::NonPositiveSpacing { row, col, value } => write!(
                f,
                "non-positive spacing {value} at row {}, column {}",
                row + 1,
                col + 1
            ),
            Error::NonFiniteValue { row, col } => {
                write!(f, "non-finite value at row {}, column {}", row + 1, col + 1)
            }
            Error::RaggedRow {
                row,
                expected,
                found,
            } => write!(f, "row {} has {found} values, expected {expected}", row + 1),
            Error::EmptyData => f.write_str("dataset contains no systems"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidModel(msg) => write!(f, "invalid model: {msg}"),
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::ModelMismatch => f.write_str("operation requires the SSK model"),
            Error::InvalidSampleSize { n, min } => {
                write!(f, "invalid sample size {n}: must be at least {min}")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::NoConvergence { sweeps, change } => write!(
                f,
                "no convergence after {sweeps} sweeps (last relative change {change:e})"
            ),
        }
    }
}

impl core::error::Error for Error {}
