use thiserror::Error;

/// Errors raised by the polygon toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("normalized area 2k^2*area is not an integer for k = {k}")]
    NonIntegralNormalization { k: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("normalized area {target} is not reachable (range {min}..={max})")]
    UnreachableArea { target: String, min: String, max: String },
    #[error("node budget of {budget} exhausted after {explored} nodes")]
    ResourceLimit { budget: u64, explored: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
