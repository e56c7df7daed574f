use thiserror::Error;

/// Errors raised by the numerical and certification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid dimension: k = {k}, n = {n} (need 1 <= k <= n)")]
    InvalidDimension { k: usize, n: usize },

    #[error("invalid index tuple: {0}")]
    InvalidTuple(String),

    #[error("rank {rank} out of range for C({n}, {k})")]
    InvalidRank { rank: usize, k: usize, n: usize },

    #[error("capacity exceeded: {what} (limit {limit})")]
    Capacity { what: String, limit: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("scaling matrix is numerically singular (condition number {condition:e})")]
    SingularScaling { condition: f64 },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("matrix is not symmetric (relative asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no certified Jacobian bound for nonlinearity: {0}")]
    UnboundedNonlinearity(String),

    #[error("wrong system structure: {0}")]
    WrongStructure(String),

    #[error("no feasible gamma: {0}")]
    NoFeasibleGamma(String),

    #[error("insufficient data: need {needed} samples, have {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("trajectory diverged at t = {time} (state norm {norm:e})")]
    Divergence { time: f64, norm: f64 },

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
