use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid multiplicity list: {0}")]
    InvalidMultiplicities(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("particles {i} and {j} collide (|sin(half gap)| = {sin_half:e})")]
    Collision { i: usize, j: usize, sin_half: f64 },

    #[error("point lies on line {line} (|<alpha, x>| = {inner:e})")]
    Singular { line: usize, inner: f64 },

    #[error("locus order {k} exceeds multiplicity {multiplicity} of line {line}")]
    Order { line: usize, k: u32, multiplicity: u32 },

    #[error("index {index} out of range for {n} lines")]
    Index { index: usize, n: usize },

    #[error("invalid solver configuration: {0}")]
    Config(String),

    #[error(
        "no convergence after {iterations} iterations \
         (scaled gradient {scaled_gradient:e}, potential {potential})"
    )]
    NoConvergence {
        iterations: usize,
        scaled_gradient: f64,
        potential: f64,
    },

    #[error("bisection bracket [{lo}, {hi}] has no sign change ({f_lo:e}, {f_hi:e})")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
