use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 2 (got {0})")]
    DimensionTooSmall(usize),
    #[error("invalid radius: {0}")]
    BadRadius(String),
    #[error("region mismatch: {0}")]
    RegionMismatch(String),
    #[error("point {0:?} outside region")]
    PointOutsideRegion(Vec<i64>),
    #[error("unknown cluster id {0}")]
    UnknownClusterId(u32),
    #[error("invalid parameter order: {0}")]
    ParameterOrder(String),
    #[error("probability out of range: {0}")]
    BadProbability(f64),
    #[error("exact enumeration too large: {got} random edges (cap {cap})")]
    EnumerationTooLarge { got: usize, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
