//! Closed-form acquisition functions: expected improvement (EI), expected
//! constrained improvement (ECI), the two expected merit improvement forms
//! (EMI) and their unified combination (UECI), together with the
//! standard-normal helpers and merit bookkeeping they share.
//!
//! All functions here are pure; every `sigma = 0` case takes the
//! deterministic limit of its acquisition. EMI values may be negative
//! because the incumbent violation offset is a constant within an
//! iteration; callers must not clamp them at zero or the ranking among
//! all-negative candidates would collapse.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::Dataset;

/// Standard normal density.
pub fn std_normal_pdf(z: f64) -> f64 {
    const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
    INV_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Standard normal CDF via the complementary error function.
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Which acquisition drives the optimization loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AcquisitionKind {
    Ei,
    Eci,
    Emi1,
    Emi2,
    Ueci,
}

/// Acquisition selection plus the parameters the closed forms need:
/// per-constraint penalties `alpha`, the UECI mixing weight `beta`, the
/// EI trade-off `xi` and the UECI feasible-count threshold `N_f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcquisitionSpec {
    pub kind: AcquisitionKind,
    pub alpha: Vec<f64>,
    pub beta: f64,
    pub xi: f64,
    pub feasible_threshold: usize,
}

impl AcquisitionSpec {
    pub fn new(kind: AcquisitionKind, alpha: Vec<f64>) -> Self {
        Self {
            kind,
            alpha,
            beta: 1.0,
            xi: 0.0,
            feasible_threshold: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha.iter().any(|a| !(*a >= 0.0)) {
            return Err(Error::InvalidConfig("alpha must be non-negative".into()));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidConfig("beta must lie in [0, 1]".into()));
        }
        if !(self.xi >= 0.0) {
            return Err(Error::InvalidConfig("xi must be non-negative".into()));
        }
        if self.feasible_threshold < 1 {
            return Err(Error::InvalidConfig(
                "feasible threshold N_f must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Posterior means and standard deviations at one candidate point:
/// objective first, then one pair per constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorBundle {
    pub objective: (f64, f64),
    pub constraints: Vec<(f64, f64)>,
}

/// The merit incumbent: objective value and per-constraint violations
/// `max(-c_j(x+), 0)` of the sample minimizing the penalty merit.
#[derive(Debug, Clone, PartialEq)]
pub struct MeritIncumbent {
    pub f_value: f64,
    pub violations: Vec<f64>,
}

impl MeritIncumbent {
    /// Reads the merit incumbent out of a dataset under `alpha`.
    pub fn from_dataset(dataset: &Dataset, alpha: &[f64]) -> Result<Self> {
        let (index, _) = dataset.best_merit(alpha)?;
        let sample = &dataset.samples()[index];
        Ok(Self {
            f_value: sample.f_value,
            violations: sample.violations(),
        })
    }

    /// Merit value `f + sum_j alpha_j * violation_j`.
    pub fn merit(&self, alpha: &[f64]) -> f64 {
        self.f_value
            + self
                .violations
                .iter()
                .zip(alpha)
                .map(|(v, a)| a * v)
                .sum::<f64>()
    }
}

/// Expected improvement over `incumbent_f` with trade-off `xi`.
///
/// Returns exactly 0 when `sigma == 0`.
pub fn expected_improvement(post: (f64, f64), incumbent_f: f64, xi: f64) -> f64 {
    let (mu, sigma) = post;
    if sigma <= 0.0 {
        return 0.0;
    }
    let shifted = incumbent_f - xi;
    let z = (shifted - mu) / sigma;
    ((shifted - mu) * std_normal_cdf(z) + sigma * std_normal_pdf(z)).max(0.0)
}

/// Probability that every constraint is satisfied, under independent
/// Gaussian posteriors: `prod_j Phi(mu_j / sigma_j)`. A degenerate
/// constraint (`sigma = 0`) contributes an indicator factor.
pub fn probability_feasible(constraints: &[(f64, f64)]) -> f64 {
    constraints
        .iter()
        .map(|&(mu, sigma)| {
            if sigma <= 0.0 {
                if mu >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                std_normal_cdf(mu / sigma)
            }
        })
        .product()
}

/// Expected constrained improvement: `PF(x) * EI(x)` against the best
/// feasible incumbent.
pub fn eci(post: &PosteriorBundle, incumbent_f: f64, xi: f64) -> f64 {
    probability_feasible(&post.constraints) * expected_improvement(post.objective, incumbent_f, xi)
}

/// Expected one-sided violation `E[max(-Y, 0)]` for `Y ~ N(mu, sigma^2)`;
/// `max(-mu, 0)` in the degenerate case.
pub fn constraint_violation_term(post_c: (f64, f64)) -> f64 {
    let (mu, sigma) = post_c;
    if sigma <= 0.0 {
        return (-mu).max(0.0);
    }
    let z = -mu / sigma;
    (-mu * std_normal_cdf(z) + sigma * std_normal_pdf(z)).max(0.0)
}

/// Form 1 expected merit improvement: the EI of the objective plus the
/// incumbent's weighted violation minus the expected weighted violation
/// at the candidate. May be negative.
pub fn emi_form1(
    post: &PosteriorBundle,
    incumbent: &MeritIncumbent,
    alpha: &[f64],
    xi: f64,
) -> f64 {
    debug_assert_eq!(post.constraints.len(), alpha.len());
    debug_assert_eq!(incumbent.violations.len(), alpha.len());
    let ei_part = expected_improvement(post.objective, incumbent.f_value, xi);
    let incumbent_penalty: f64 = incumbent
        .violations
        .iter()
        .zip(alpha)
        .map(|(v, a)| a * v)
        .sum();
    let candidate_penalty: f64 = post
        .constraints
        .iter()
        .zip(alpha)
        .map(|(c, a)| a * constraint_violation_term(*c))
        .sum();
    ei_part + incumbent_penalty - candidate_penalty
}

/// Form 2 expected merit improvement: the incumbent merit value minus the
/// posterior objective mean and the expected weighted violation. Uses no
/// uncertainty information from the objective. May be negative.
pub fn emi_form2(post: &PosteriorBundle, incumbent_merit: f64, alpha: &[f64]) -> f64 {
    debug_assert_eq!(post.constraints.len(), alpha.len());
    let candidate_penalty: f64 = post
        .constraints
        .iter()
        .zip(alpha)
        .map(|(c, a)| a * constraint_violation_term(*c))
        .sum();
    incumbent_merit - post.objective.0 - candidate_penalty
}

/// Unified expected constrained improvement:
/// `(1 - beta) * ECI + beta * EMI_1`.
///
/// The ECI branch scores against the best feasible incumbent and the EMI
/// branch against the merit incumbent. At the endpoints only the active
/// branch is evaluated, so `beta = 1` needs no feasible incumbent; any
/// `beta < 1` without one is an error.
pub fn ueci(
    post: &PosteriorBundle,
    feasible_incumbent_f: Option<f64>,
    merit_incumbent: &MeritIncumbent,
    alpha: &[f64],
    beta: f64,
    xi: f64,
) -> Result<f64> {
    if beta >= 1.0 {
        return Ok(emi_form1(post, merit_incumbent, alpha, xi));
    }
    let feasible_f = feasible_incumbent_f.ok_or(Error::MissingFeasibleIncumbent)?;
    let eci_part = eci(post, feasible_f, xi);
    if beta <= 0.0 {
        return Ok(eci_part);
    }
    Ok((1.0 - beta) * eci_part + beta * emi_form1(post, merit_incumbent, alpha, xi))
}
