use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no cost rule matches x={x_window}, y={y_window}")]
    NoMatchingRule { x_window: String, y_window: String },

    #[error("+inf and -inf cannot be added")]
    InfinityClash,

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("invalid horizon: {0}")]
    InvalidHorizon(String),

    #[error("invalid migration cost: {0}")]
    InvalidAlpha(String),

    #[error("table with {entries} entries exceeds the limit of {limit}")]
    TableTooLarge { entries: u128, limit: u128 },

    #[error("aggregation `{0}` is not supported by the cycle analysis")]
    UnsupportedAggregation(String),

    #[error("unsupported problem: {0}")]
    UnsupportedProblem(String),

    #[error("edge sequence is not a closed walk: {0}")]
    NotAWalk(String),

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("graph has no directed cycle the adversary can use")]
    NoCycle,

    #[error("graph has {vertices} vertices, more than the limit of {limit}")]
    GraphTooLarge { vertices: u128, limit: usize },

    #[error("invalid edge weights: {0}")]
    InvalidWeights(String),

    #[error("search space has {count} candidates, more than the limit of {limit}")]
    SearchSpaceTooLarge { count: u128, limit: u128 },

    #[error("exact arithmetic overflowed")]
    Overflow,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by a malformed document or argument.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Validation(_)
                | Error::NoMatchingRule { .. }
                | Error::InvalidHorizon(_)
                | Error::InvalidAlpha(_)
                | Error::InvalidArgument(_)
                | Error::UnsupportedAggregation(_)
                | Error::UnsupportedProblem(_)
        )
    }

    /// True for errors raised by a size guard.
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Error::TableTooLarge { .. }
                | Error::GraphTooLarge { .. }
                | Error::SearchSpaceTooLarge { .. }
                | Error::Overflow
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
