use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty window")]
    EmptyWindow,

    #[error("index out of range: n = {n} (valid range 1..={max_n})")]
    IndexOutOfRange { n: u64, max_n: u64 },

    #[error("window of {len} points exceeds the materialization cap of {cap}")]
    WindowTooLarge { len: u64, cap: u64 },

    #[error("frequencies must be distinct")]
    DuplicateFrequencies,

    #[error("schedule too short: need at least {min} scales, got {len}")]
    ScheduleTooShort { len: usize, min: usize },

    #[error("schedule must be strictly increasing")]
    ScheduleNotIncreasing,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
