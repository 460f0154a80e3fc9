use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("rank {rank} exceeds the allowed dimension {limit}")]
    RankTooLarge { rank: usize, limit: usize },

    #[error("empty point configuration")]
    EmptyConfiguration,

    #[error("infeasible pair: {}", .0.join("; "))]
    InfeasiblePair(Vec<String>),

    #[error("unknown code name `{0}`")]
    UnknownCode(String),

    #[error("certificate rejected: {0}")]
    CertificateRejected(String),

    #[error("projection residual {residual:e} exceeds {limit:e}")]
    ProjectionResidual { residual: f64, limit: f64 },

    #[error("infeasible pattern: {0}")]
    InfeasiblePattern(String),

    #[error("linear program is {0}")]
    Lp(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
