use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument must be nonnegative, got {0}")]
    NegativeArgument(String),

    #[error("F2-minus is only defined for x >= 1, got {0}")]
    MinusTwoDomain(String),

    #[error("invalid graded index ({i},{j}): need j <= i")]
    InvalidGradedIndex { i: usize, j: usize },

    #[error("moment x^{s} y^{t} is outside the table range (max total degree {max})")]
    MomentOutOfRange { s: usize, t: usize, max: usize },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// The `index`-th pivot of the elimination vanished, i.e. the leading
    /// principal minor of that order is zero.
    #[error("factorization breakdown at index {index}")]
    Breakdown { index: usize },

    #[error("insufficient depth: {what} needs depth {required}, have {available}")]
    InsufficientDepth {
        what: &'static str,
        required: usize,
        available: usize,
    },

    #[error("comparison window is empty at depth {depth}")]
    EmptyWindow { depth: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("n = {n} is below the projection threshold {threshold}")]
    BelowThreshold { n: usize, threshold: usize },

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("config error at {field}: {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
