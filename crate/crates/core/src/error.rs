use alloc::vec::Vec;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{field}: need at least {min} categories, got {found}")]
    TooFewCategories { field: &'static str, min: usize, found: usize },
    #[error("{field}[{index}] = {value} is not allowed ({reason})")]
    BadEntry { field: &'static str, index: usize, value: f64, reason: &'static str },
    #[error("{field}: entries sum to {sum}, expected 1")]
    NotNormalized { field: &'static str, sum: f64 },
    #[error("{field}: entry {index} breaks the decreasing order")]
    NotSorted { field: &'static str, index: usize },
    #[error("{field}: {value} is outside {range}")]
    OutOfRange { field: &'static str, value: f64, range: &'static str },
    #[error("{field}: expected length {expected}, got {found}")]
    LengthMismatch { field: &'static str, expected: usize, found: usize },
    #[error("{0}")]
    Invalid(&'static str),
    #[error("escort weight underflows to zero at order {order}")]
    Underflow { order: f64 },
    #[error("distribution carries ties (multiplicity); the chart is undefined there")]
    Multiplicity,
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension {dim} exceeds the enumeration guard {max}")]
    Guard { dim: usize, max: usize },
    #[error("{orders} orders cannot identify {needed} free coordinates; use the collision witness instead")]
    UnderDetermined { orders: usize, needed: usize },
    #[error("{orders} orders with K = {k} is the injective regime, no collision exists")]
    Injective { orders: usize, k: usize },
    #[error("no convergence after {starts} local solves, best residual {best_residual:e}")]
    NoConvergence { best_residual: f64, starts: usize },
    #[error("Jacobian is rank deficient at the start, singular values {singular_values:?}")]
    RankDeficient { singular_values: Vec<f64> },
    #[error("level-set path left the simplex after {completed} steps")]
    BoundaryExit { completed: usize },
    #[error("no collision reaching separation {min_separation} was found")]
    CollisionNotFound { min_separation: f64 },
    #[error("sampling failed after {attempts} rejections")]
    SamplingFailed { attempts: usize },
}
