use thiserror::Error;

/// Errors raised by the numerical core.
///
/// Numeric payloads are carried as `f64` regardless of the scalar type the
/// computation ran on.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    NonConvergence { estimate: f64, error_bound: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("index {index} is not an interior index of a grid with {len} points")]
    NotInterior { index: usize, len: usize },

    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeOutOfRange { degree: usize, cap: usize },

    #[error("argument {value} lies outside [-1, 1]")]
    OutsideUnitInterval { value: f64 },

    #[error("series truncation N = {given} is too small; the tail bound needs N >= {needed}")]
    InsufficientTruncation { given: usize, needed: usize },

    #[error("truncated heat series is {value:e}, below the clamp threshold -{tail_tol:e}")]
    NegativeTruncation { value: f64, tail_tol: f64 },

    #[error("kernel {kernel} cannot act on a {domain} grid")]
    IncompatibleDomain { kernel: String, domain: &'static str },

    #[error("operation needs a uniform grid, got {domain}")]
    NonUniformGrid { domain: &'static str },

    #[error("hypothesis `{hypothesis}` failed: {detail}")]
    Hypothesis { hypothesis: &'static str, detail: String },

    #[error("datum row {row}: {reason}")]
    MalformedDatum { row: usize, reason: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
