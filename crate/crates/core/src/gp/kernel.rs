//! Stationary covariance functions with per-dimension (ARD) length scales.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SQRT5: f64 = 2.236_067_977_499_79;

/// Covariance family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelFamily {
    SquaredExponential,
    Matern52,
}

/// Kernel hyperparameters: family, one length scale per input dimension,
/// signal variance and the jitter added to the Gram diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    pub family: KernelFamily,
    pub length_scales: Vec<f64>,
    pub signal_variance: f64,
    pub nugget: f64,
}

impl KernelConfig {
    pub fn new(
        family: KernelFamily,
        length_scales: Vec<f64>,
        signal_variance: f64,
        nugget: f64,
    ) -> Result<Self> {
        if length_scales.is_empty() || length_scales.iter().any(|l| !(*l > 0.0)) {
            return Err(Error::InvalidConfig(
                "length scales must be positive and non-empty".into(),
            ));
        }
        if !(signal_variance > 0.0) {
            return Err(Error::InvalidConfig("signal variance must be positive".into()));
        }
        if !(nugget >= 0.0) {
            return Err(Error::InvalidConfig("nugget must be non-negative".into()));
        }
        Ok(Self {
            family,
            length_scales,
            signal_variance,
            nugget,
        })
    }

    pub fn dim(&self) -> usize {
        self.length_scales.len()
    }

    /// Scaled squared distance `sum_i ((a_i - b_i) / l_i)^2`.
    fn scaled_sq_dist(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut r2 = 0.0;
        for ((ai, bi), l) in a.iter().zip(b).zip(&self.length_scales) {
            let d = (ai - bi) / l;
            r2 += d * d;
        }
        r2
    }

    /// `k(a, b)` without dimension checks; used on hot paths where the
    /// caller guarantees matching dimensions.
    pub(crate) fn eval_unchecked(&self, a: &[f64], b: &[f64]) -> f64 {
        let r2 = self.scaled_sq_dist(a, b);
        match self.family {
            KernelFamily::SquaredExponential => self.signal_variance * (-0.5 * r2).exp(),
            KernelFamily::Matern52 => {
                let r = r2.sqrt();
                self.signal_variance * (1.0 + SQRT5 * r + 5.0 / 3.0 * r2) * (-SQRT5 * r).exp()
            }
        }
    }
}

/// Evaluates `k(a, b)`. Symmetric in its arguments and equal to the
/// signal variance at zero distance.
pub fn kernel_eval(config: &KernelConfig, a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != config.dim() {
        return Err(Error::DimensionMismatch {
            expected: config.dim(),
            got: a.len(),
        });
    }
    if b.len() != config.dim() {
        return Err(Error::DimensionMismatch {
            expected: config.dim(),
            got: b.len(),
        });
    }
    Ok(config.eval_unchecked(a, b))
}
