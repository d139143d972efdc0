use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series hit its term cap (or overflowed) before meeting the
    /// stopping rule.
    #[error("series did not converge after {terms} terms (partial sum {partial:e}, last term {last_term:e})")]
    NonConvergence {
        terms: usize,
        partial: f64,
        last_term: f64,
    },

    /// Adaptive quadrature ran out of subdivisions.
    #[error("quadrature did not converge: value {value:e}, error estimate {estimate:e} after {intervals} intervals")]
    Quadrature {
        value: f64,
        estimate: f64,
        intervals: usize,
    },

    /// The hypergeometric sum lost too many digits to cancellation.
    #[error("series cancellation: max partial sum exceeds result by a factor {ratio:e}")]
    Cancellation { ratio: f64 },

    /// Evaluation failure for a specific table entry.
    #[error("multiplier table entry |k|^2 = {norm_sq}: {source}")]
    TableEntry {
        norm_sq: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("corrupted multiplier table: m = {value:e} > 0 at |k|^2 = {norm_sq}")]
    CorruptedTable { norm_sq: u64, value: f64 },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("json error: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
