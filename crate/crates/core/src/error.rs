use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index out of range: {what} = {index} (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("phase point mismatch: state carries phases at {expected:?}, requested {requested:?}")]
    PhaseMismatch {
        expected: [f64; 4],
        requested: [f64; 4],
    },

    #[error("bracket paths disagree: relative residual {residual:e} exceeds {tolerance:e}")]
    Inconsistent { residual: f64, tolerance: f64 },

    #[error("observable is not constraint-compatible at mode {mode} (residual {residual:e})")]
    NotConstraintCompatible { mode: usize, residual: f64 },

    #[error("degenerate particle state: kinetic time component {0} <= 0")]
    Superluminal(f64),

    #[error("integration aborted at step {step}: {reason}")]
    IntegrationAborted { step: usize, reason: String },

    #[error("tangent map: {0}")]
    TangentMap(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
