use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid weight scheme: {0}")]
    InvalidWeights(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matching is not a perfect matching of the diamond: {0}")]
    InvalidMatching(String),

    #[error("height increments do not close around face {face:?}: {detail}")]
    InconsistentHeight { face: (i64, i64), detail: String },

    #[error("matrix is numerically singular")]
    Singular,

    #[error("enumeration refused: order {order} exceeds cap {cap}")]
    EnumerationCap { order: usize, cap: usize },

    #[error("weight table underflow at level {level}, cell ({ci}, {cj})")]
    WeightUnderflow { level: usize, ci: usize, cj: usize },

    #[error("interpolation residual {residual:e} exceeds tolerance {tolerance:e}")]
    Interpolation { residual: f64, tolerance: f64 },

    #[error("z = {z} is within {distance:e} of the pole beta_v = {pole}")]
    PoleProximity { z: String, pole: f64, distance: f64 },

    #[error("quadrature failed to converge: estimated error {error:e}")]
    Quadrature { error: f64 },

    #[error("degenerate curve: {0}")]
    Degenerate(String),

    #[error("facet grid is empty: {0}")]
    EmptyGrid(String),

    #[error("no spectral prediction available: {0}")]
    NoPrediction(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
