//! Error types shared across the library.

use thiserror::Error;

/// Errors produced by problem construction, model fitting and the
/// optimization loops.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Vector lengths disagree with the expected dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A point lies outside the bound constraints.
    #[error("point lies outside the domain in coordinate {coordinate}: {value} not in [{lower}, {upper}]")]
    OutOfDomain {
        coordinate: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    /// Invalid bounds, counts or parameters.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An operation that needs at least one sample received none.
    #[error("dataset is empty")]
    EmptyDataset,

    /// A sample with an identical input is already present.
    #[error("duplicate sample: x is bitwise equal to sample {index}")]
    DuplicateSample { index: usize },

    /// Gram matrix stayed non positive definite after nugget escalation.
    #[error("GP fit failed: Gram matrix not positive definite (nugget escalated to {nugget})")]
    NotPositiveDefinite { nugget: f64 },

    /// Hyperparameter selection could not produce any valid model.
    #[error("hyperparameter search failed: {0}")]
    HyperparameterSearch(String),

    /// An acquisition needs a feasible incumbent that does not exist.
    #[error("no feasible incumbent available (required for beta < 1)")]
    MissingFeasibleIncumbent,
}

pub type Result<T> = std::result::Result<T, Error>;
