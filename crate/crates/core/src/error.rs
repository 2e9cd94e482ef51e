use thiserror::Error;

/// Errors surfaced by samplers, solvers, and the selective-inference pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point lies outside the target domain")]
    DomainViolation,

    #[error("direction vector is not unit length")]
    NotUnitLength,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("integrated rate never reaches the threshold after {0} bracket doublings")]
    Divergence(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("numerical failure: {0}")]
    Numerical(&'static str),

    #[error("empty sample set")]
    EmptySamples,

    #[error("degenerate randomization scale (response has zero variance)")]
    DegenerateScale,

    #[error("coordinate descent did not converge after {0} passes")]
    NoConvergence(usize),

    #[error("unknown target spec '{0}'")]
    UnknownTarget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
