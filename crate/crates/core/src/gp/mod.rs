//! Gaussian-process regression for scalar black boxes: kernels, exact
//! fitting via Cholesky factorization, posterior prediction and marginal
//! likelihood based hyperparameter selection.
//!
//! The objective and each constraint of a problem get independent models.

mod hyper;
mod kernel;
mod model;
mod scaled;

pub use hyper::{fit_hyperparameters, HyperSearchConfig};
pub use kernel::{kernel_eval, KernelConfig, KernelFamily};
pub use model::SurrogateModel;
pub use scaled::ScaledSurrogate;
