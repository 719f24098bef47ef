//! Constrained Bayesian optimization with merit-function acquisitions.
//!
//! The crate implements Gaussian-process surrogate modeling, the
//! classical EI/ECI acquisitions, two expected merit improvement (EMI)
//! acquisitions built on the penalty merit function, a unified ECI/EMI
//! acquisition (UECI) with a feasibility-driven switch, and the
//! sequential optimization loops that use them. Feasibility convention:
//! `c_j(x) >= 0` for every constraint.

pub mod acquisition;
pub mod benchmarks;
pub mod error;
pub mod gp;
pub mod optimizer;
pub mod problem;

pub use error::{Error, Result};
pub use problem::{BoundedDomain, Dataset, Problem, Sample};
