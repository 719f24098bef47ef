//! Problem and data abstractions: bounded domains, black-box problems,
//! evaluated samples and the dataset accumulated over iterations.
//!
//! The feasibility convention throughout the crate is `c_j(x) >= 0` for
//! every constraint `j`. A point exactly on a constraint boundary counts
//! as feasible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hyper-rectangle of box constraints on the inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoundedDomain {
    /// Builds a domain from lower/upper bounds. Requires equal, nonzero
    /// lengths and `lower[i] < upper[i]` in every coordinate.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::InvalidConfig("domain dimension must be >= 1".into()));
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "domain bounds must satisfy lower < upper; coordinate {i} has [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// Convenience constructor for the common `[lo, hi]^n` cube.
    pub fn cube(n: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; n], vec![hi; n])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Component-wise widths `upper - lower`.
    pub fn widths(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| hi - lo)
            .collect()
    }

    /// Whether `x` lies inside the domain (bounds inclusive).
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *v >= *lo && *v <= *hi)
    }

    /// Returns an error naming the first violated coordinate, if any.
    pub fn check_contains(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        for (i, v) in x.iter().enumerate() {
            if !(*v >= self.lower[i] && *v <= self.upper[i]) {
                return Err(Error::OutOfDomain {
                    coordinate: i,
                    value: *v,
                    lower: self.lower[i],
                    upper: self.upper[i],
                });
            }
        }
        Ok(())
    }

    /// Clips `x` component-wise into the domain.
    pub fn clip(&self, x: &mut [f64]) {
        for (v, (lo, hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*lo, *hi);
        }
    }

    /// Maps a point into normalized `[0, 1]^n` coordinates.
    pub fn normalize(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(v, (lo, hi))| (v - lo) / (hi - lo))
            .collect()
    }
}

type BlackBox = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// An inequality-constrained black-box minimization problem:
/// minimize `f(x)` over the domain subject to `c_j(x) >= 0`.
///
/// Objective and constraints must be deterministic: the same input
/// always yields the same values.
pub struct Problem {
    domain: BoundedDomain,
    objective: Box<BlackBox>,
    constraints: Vec<Box<BlackBox>>,
}

impl Problem {
    pub fn new(
        domain: BoundedDomain,
        objective: Box<BlackBox>,
        constraints: Vec<Box<BlackBox>>,
    ) -> Self {
        Self {
            domain,
            objective,
            constraints,
        }
    }

    pub fn domain(&self) -> &BoundedDomain {
        &self.domain
    }

    /// Number of inequality constraints `m` (may be zero).
    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// Evaluates objective and constraints at `x` and assembles a
    /// [`Sample`] with its feasibility flag.
    ///
    /// Errors when `x` lies outside the domain.
    pub fn evaluate(&self, x: &[f64]) -> Result<Sample> {
        self.domain.check_contains(x)?;
        let f_value = (self.objective)(x);
        let c_values: Vec<f64> = self.constraints.iter().map(|c| c(x)).collect();
        Ok(Sample::new(x.to_vec(), f_value, c_values))
    }
}

impl std::fmt::Debug for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem")
            .field("domain", &self.domain)
            .field("constraints", &self.constraints.len())
            .finish()
    }
}

/// One evaluated point: input, objective value, constraint values and
/// the derived feasibility flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub x: Vec<f64>,
    pub f_value: f64,
    pub c_values: Vec<f64>,
    pub feasible: bool,
}

impl Sample {
    /// Feasible iff every constraint value is `>= 0` (boundary included).
    pub fn new(x: Vec<f64>, f_value: f64, c_values: Vec<f64>) -> Self {
        let feasible = c_values.iter().all(|c| *c >= 0.0);
        Self {
            x,
            f_value,
            c_values,
            feasible,
        }
    }

    /// Per-constraint violations `max(-c_j, 0)`.
    pub fn violations(&self) -> Vec<f64> {
        self.c_values.iter().map(|c| (-c).max(0.0)).collect()
    }

    /// Penalty merit value `f + sum_j alpha_j * max(-c_j, 0)`.
    pub fn merit(&self, alpha: &[f64]) -> f64 {
        merit_value(self.f_value, &self.c_values, alpha)
    }
}

/// Penalty merit function `f + sum_j alpha_j * max(-c_j, 0)`.
pub fn merit_value(f_value: f64, c_values: &[f64], alpha: &[f64]) -> f64 {
    debug_assert_eq!(c_values.len(), alpha.len());
    f_value
        + c_values
            .iter()
            .zip(alpha)
            .map(|(c, a)| a * (-c).max(0.0))
            .sum::<f64>()
}

/// Ordered collection of evaluated samples of a single problem.
///
/// Append-only; inserting an input bitwise equal to an existing one is
/// rejected because a duplicated row makes the GP Gram matrix singular.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    samples: Vec<Sample>,
    dim: usize,
    constraint_count: usize,
}

impl Dataset {
    pub fn new(dim: usize, constraint_count: usize) -> Self {
        Self {
            samples: Vec::new(),
            dim,
            constraint_count,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraint_count(&self) -> usize {
        self.constraint_count
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    /// Appends a sample, rejecting dimension mismatches and inputs that
    /// are bitwise equal to an existing sample.
    pub fn push(&mut self, sample: Sample) -> Result<()> {
        if sample.x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: sample.x.len(),
            });
        }
        if sample.c_values.len() != self.constraint_count {
            return Err(Error::DimensionMismatch {
                expected: self.constraint_count,
                got: sample.c_values.len(),
            });
        }
        if let Some(index) = self.samples.iter().position(|s| s.x == sample.x) {
            return Err(Error::DuplicateSample { index });
        }
        self.samples.push(sample);
        Ok(())
    }

    /// Number of feasible samples.
    pub fn feasible_count(&self) -> usize {
        self.samples.iter().filter(|s| s.feasible).count()
    }

    /// The feasible sample with minimal objective, or `None` when no
    /// feasible sample exists. Ties go to the earliest sample.
    pub fn best_feasible(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, s) in self.samples.iter().enumerate() {
            if !s.feasible {
                continue;
            }
            match best {
                Some((_, f)) if s.f_value >= f => {}
                _ => best = Some((i, s.f_value)),
            }
        }
        best
    }

    /// The sample minimizing the penalty merit value under `alpha`.
    /// Ties go to the earliest sample. Errors on an empty dataset.
    pub fn best_merit(&self, alpha: &[f64]) -> Result<(usize, f64)> {
        if self.samples.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut best_index = 0;
        let mut best_value = self.samples[0].merit(alpha);
        for (i, s) in self.samples.iter().enumerate().skip(1) {
            let value = s.merit(alpha);
            if value < best_value {
                best_index = i;
                best_value = value;
            }
        }
        Ok((best_index, best_value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(f: f64, c: &[f64]) -> Sample {
        // x distinct per (f, c) for dataset insertion
        Sample::new(vec![f, c.iter().sum::<f64>()], f, c.to_vec())
    }

    #[test]
    fn domain_rejects_bad_bounds() {
        assert!(BoundedDomain::new(vec![0.0], vec![0.0]).is_err());
        assert!(BoundedDomain::new(vec![1.0], vec![0.0]).is_err());
        assert!(BoundedDomain::new(vec![0.0, 0.0], vec![1.0]).is_err());
        assert!(BoundedDomain::new(vec![], vec![]).is_err());
        assert!(BoundedDomain::new(vec![0.0], vec![1.0]).is_ok());
    }

    #[test]
    fn feasibility_follows_sign_convention() {
        assert!(Sample::new(vec![0.0], 1.0, vec![0.0, 2.0]).feasible);
        assert!(!Sample::new(vec![0.0], 1.0, vec![0.0, -1e-12]).feasible);
        assert!(Sample::new(vec![0.0], 1.0, vec![]).feasible);
    }

    #[test]
    fn evaluate_checks_domain() {
        let domain = BoundedDomain::cube(2, 0.0, 6.0).unwrap();
        let problem = Problem::new(
            domain,
            Box::new(|x: &[f64]| x[0].sin() + x[1]),
            vec![Box::new(|x: &[f64]| -x[0].sin() * x[1].sin() - 0.95)],
        );
        let s = problem.evaluate(&[0.0, 0.0]).unwrap();
        assert_eq!(s.f_value, 0.0);
        assert_eq!(s.c_values[0], -0.95);
        assert!(!s.feasible);

        // near (3pi/2, pi/2): opposite-sign sines, c = 1 - 0.95
        let s = problem.evaluate(&[4.7124, 1.5708]).unwrap();
        assert!((s.c_values[0] - 0.05).abs() < 1e-6);
        assert!(s.feasible);

        assert!(matches!(
            problem.evaluate(&[7.0, 0.0]),
            Err(Error::OutOfDomain { coordinate: 0, .. })
        ));
    }

    #[test]
    fn best_feasible_skips_infeasible_and_breaks_ties_early() {
        let mut ds = Dataset::new(2, 1);
        ds.push(sample(3.0, &[1.0])).unwrap();
        ds.push(sample(0.1, &[-1.0])).unwrap();
        ds.push(sample(1.5, &[0.5])).unwrap();
        assert_eq!(ds.best_feasible(), Some((2, 1.5)));

        let mut ds = Dataset::new(2, 1);
        ds.push(sample(2.0, &[1.0])).unwrap();
        ds.push(sample(2.0, &[2.0])).unwrap();
        assert_eq!(ds.best_feasible(), Some((0, 2.0)));

        let mut ds = Dataset::new(2, 1);
        ds.push(sample(1.0, &[-0.5])).unwrap();
        assert_eq!(ds.best_feasible(), None);
    }

    #[test]
    fn best_merit_hand_computed() {
        let mut ds = Dataset::new(2, 1);
        ds.push(sample(1.0, &[-2.0])).unwrap();
        ds.push(sample(2.0, &[1.0])).unwrap();
        // alpha = 1: phi = 1 + 2 = 3 vs phi = 2
        assert_eq!(ds.best_merit(&[1.0]).unwrap(), (1, 2.0));
        // alpha = 0: phi reduces to f
        assert_eq!(ds.best_merit(&[0.0]).unwrap(), (0, 1.0));

        let mut single = Dataset::new(2, 1);
        single.push(sample(4.0, &[-1.0])).unwrap();
        assert_eq!(single.best_merit(&[1.0]).unwrap().0, 0);

        let empty = Dataset::new(2, 1);
        assert!(matches!(empty.best_merit(&[1.0]), Err(Error::EmptyDataset)));
    }

    #[test]
    fn dataset_rejects_duplicates() {
        let mut ds = Dataset::new(1, 0);
        ds.push(Sample::new(vec![0.5], 1.0, vec![])).unwrap();
        assert!(matches!(
            ds.push(Sample::new(vec![0.5], 2.0, vec![])),
            Err(Error::DuplicateSample { index: 0 })
        ));
        // a bitwise different x is fine
        ds.push(Sample::new(vec![0.5 + 1e-12], 2.0, vec![])).unwrap();
    }
}
