use thiserror::Error;

/// Errors raised by the library. Each variant names the violated constraint.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("symmetric eigensolver did not converge on a {0}x{0} Gram matrix")]
    EigenNonConvergence(usize),

    #[error("out of regime: {0}")]
    OutOfRegime(String),

    #[error("slope fit infeasible: need at least 3 points with n_hits >= {hit_floor}, per-point hits (osnr_db, n_hits): {hits:?}")]
    FitInfeasible { hit_floor: u64, hits: Vec<(f64, u64)> },

    #[error("codebook size M = {m} is outside [2, {cap}]; lower r, l or osnr")]
    CodebookInfeasible { m: f64, cap: usize },

    #[error("brute-force grid has {points} points, above the limit of {limit}")]
    GridTooLarge { points: f64, limit: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
