use thiserror::Error;

/// Errors produced anywhere in the estimation pipeline.
#[derive(Debug, Error)]
pub enum FisherError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("degenerate point: row {row} has norm {norm:e}, cannot project onto the unit sphere")]
    DegeneratePoint { row: usize, norm: f64 },

    /// Every point is Fisher-separable from every other point on the whole
    /// alpha grid, so no finite dimension can be inferred. The dimension is
    /// above the measurable range for this sample size.
    #[error("all points are separable: dimension is above the measurable range")]
    FullySeparable,

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid dataset spec: {0}")]
    Spec(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, FisherError>;

impl FisherError {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            FisherError::Usage(_) | FisherError::Spec(_) => 2,
            FisherError::Parse { .. } | FisherError::Json(_) => 3,
            FisherError::Degenerate(_) | FisherError::DegeneratePoint { .. } => 4,
            FisherError::FullySeparable => 5,
            _ => 1,
        }
    }
}
