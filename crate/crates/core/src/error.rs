use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCount { left: usize, right: usize },

    #[error("variable index {index} out of range for a polynomial in {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("(g, n) = ({g}, {n}) is unstable: 2g - 2 + n must be positive")]
    Unstable { g: u32, n: usize },

    #[error("(g, n) = ({g}, {n}) is not a base case")]
    NotBaseCase { g: u32, n: usize },

    #[error("dimension {dim} of (g, n) = ({g}, {n}) exceeds the cap {cap}")]
    DimensionCap {
        g: u32,
        n: usize,
        dim: usize,
        cap: usize,
    },

    #[error("expected {expected} boundary labels, got {got}")]
    LabelCount { expected: usize, got: usize },

    #[error("invalid boundary label: {0}")]
    InvalidLabel(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error("outside the domain: {0}")]
    Domain(String),

    #[error("no sign change of the crown-length equation on ({lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),
}
