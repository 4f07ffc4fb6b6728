use thiserror::Error;

/// Errors raised by the numerical routines of the lab.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("functions live on different grids")]
    GridMismatch,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty window [{lo}, {hi})")]
    EmptyWindow { lo: f64, hi: f64 },

    #[error("insufficient bandwidth: need max frequency {needed}, grid resolves {available}; use M >= {required_m}")]
    Bandwidth {
        needed: f64,
        available: f64,
        required_m: usize,
    },

    #[error("quadrature cutoff too coarse: eta * max frequency = {product} > 0.1")]
    CutoffTooLarge { product: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cover gap at ({xi1}, {xi2})")]
    CoverGap { xi1: f64, xi2: f64 },

    #[error("aliasing risk: |n| = {index} exceeds nodes/8 = {limit}")]
    AliasingRisk { index: i64, limit: i64 },

    #[error("square budget exceeded: {0}")]
    Budget(String),

    #[error("mismatched parameter lists")]
    MismatchedReports,
}

pub type Result<T> = std::result::Result<T, LabError>;
