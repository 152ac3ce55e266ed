//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated a precondition (bad dimension, empty input, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input data is structurally fine but its values are unusable
    /// (non-finite entries and the like).
    #[error("invalid data: {0}")]
    InvalidData(String),

    /// A value left the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A row with zero variance cannot be standardized.
    #[error("degenerate row {row}: zero sample variance")]
    DegenerateRow { row: usize },

    /// An iterative routine failed to converge or lost all precision.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// The requested parameter regime is handled by a different convention.
    #[error("unsupported convention: {0}")]
    UnsupportedConvention(String),

    /// No closed form is available for the requested configuration.
    #[error("closed form unavailable: {0}")]
    UnsupportedClosedForm(String),

    /// Denominator of a reported ratio is zero.
    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    /// A snapshot stream changed shape mid-flight.
    #[error("invalid stream: {0}")]
    InvalidStream(String),

    /// A capture file is malformed; `offset` is where parsing stopped.
    #[error("format error at byte {offset}: {message}")]
    Format { offset: u64, message: String },

    /// Declared and actual dimensions disagree.
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    /// A simulated server failed; the coordinator reports which one.
    #[error("server {server_id}: {source}")]
    Server {
        server_id: usize,
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid_argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
