use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the zeta function at z = 1")]
    Pole,
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("Landau threshold divergence at filling q = {q}")]
    ThresholdDivergence { q: f64 },
    #[error("index {index} exceeds table capacity {capacity}")]
    Capacity { index: usize, capacity: usize },
    #[error("tolerance not reached: best estimate {best}, error estimate {error}")]
    ToleranceFailure { best: f64, error: f64 },
    #[error("series bound still above tolerance after {terms} terms (partial sum {partial})")]
    Truncation { terms: usize, partial: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("non-finite integrand value at x = {x}")]
    NonFinite { x: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
