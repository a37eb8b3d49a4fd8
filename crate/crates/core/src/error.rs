use std::path::PathBuf;

/// Errors returned by this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// No samples were supplied.
    #[error("empty input")]
    EmptyInput,
    /// Timestamps must be strictly increasing.
    #[error("timestamps are not strictly increasing at position {0}")]
    NonMonotonicTimestamps(usize),
    /// Every day was removed by the gap policy.
    #[error("every day was dropped by the gap policy")]
    AllDaysDropped,
    /// A timestamp delta does not fit the configured sampling interval.
    #[error("inconsistent sampling interval: {0}")]
    InconsistentSamplingInterval(String),
    /// A sample value or parameter was NaN or infinite.
    #[error("non-finite input")]
    NonFiniteInput,
    /// A construction parameter was out of range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The series is shorter than the operation requires.
    #[error("series too short: need at least {needed} samples, got {got}")]
    SeriesTooShort { needed: usize, got: usize },
    /// Partition width below 2.
    #[error("invalid period length {0} (must be >= 2)")]
    InvalidPeriod(usize),
    /// Column or row index out of range.
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    /// Too few samples to fit an AR model of the requested order.
    #[error("too short: {got} samples cannot support AR order {order}")]
    TooShort { got: usize, order: usize },
    /// Prediction history shorter than the model order.
    #[error("insufficient history: model order {order}, got {got} values")]
    InsufficientHistory { order: usize, got: usize },

    /// Every sample at some scale lies inside the cone of influence.
    #[error("every sample at scale index {0} lies inside the cone of influence")]
    AllMasked(usize),
    /// The global wavelet spectrum has no significant interior peak.
    #[error("no dominant period in the wavelet spectrum")]
    NoDominantPeriod,

    /// Fewer than three days of history for the partitioned forecast.
    #[error("not enough days: need at least 3, got {0}")]
    NotEnoughDays(usize),
    /// Sequences that must share a length do not.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    /// Day length is not a whole number of hours.
    #[error("{len} slots are not divisible by {by} samples per hour")]
    NotDivisible { len: usize, by: usize },
    /// Nothing to average.
    #[error("empty list")]
    EmptyList,
    /// A forecast was requested from an empty series.
    #[error("empty series")]
    EmptySeries,
    /// The training history required before a target day is not present.
    #[error("missing history before target day {0}")]
    MissingHistory(i64),
    /// The target day itself is not (completely) present in the series.
    #[error("target day {0} is not fully present in the series")]
    TargetDayUnavailable(i64),
    /// Unrecognised forecasting method name.
    #[error("unknown method '{0}'")]
    UnknownMethod(String),

    /// Input file does not exist.
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    /// A row of a delimited input file could not be parsed.
    #[error("parse error at row {row}, column {column}: {reason}")]
    ParseError {
        row: usize,
        column: String,
        reason: String,
    },
    /// Ingested wind speeds must be non-negative.
    #[error("negative wind speed at row {0}")]
    NegativeSpeed(usize),
    /// Configuration file could not be interpreted.
    #[error("config error: {0}")]
    Config(String),
    /// Writing an output file failed.
    #[error("write error: {0}")]
    WriteError(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;
