//! Exact Gaussian-process regression through Cholesky factorization.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gp::kernel::KernelConfig;

/// Nugget escalation floor and ceiling: on Cholesky failure the jitter is
/// raised to at least `NUGGET_FLOOR` and multiplied by 10 until it would
/// exceed `NUGGET_CEILING`, at which point fitting fails.
const NUGGET_FLOOR: f64 = 1e-10;
const NUGGET_CEILING: f64 = 1e-4;

/// A fitted Gaussian process for one scalar function.
///
/// Holds the training data, the lower-triangular Cholesky factor `L` of
/// `K + nugget * I` and the weights `w` solving `(K + nugget * I) w = y - m`.
/// Immutable after fitting; prediction is read-only.
#[derive(Debug, Clone)]
pub struct SurrogateModel {
    kernel: KernelConfig,
    train_x: Vec<Vec<f64>>,
    train_y: Vec<f64>,
    mean_const: f64,
    chol_factor: DMatrix<f64>,
    alpha_weights: DVector<f64>,
    log_marginal_likelihood: f64,
}

impl SurrogateModel {
    /// Fits an exact GP on `xs`/`ys` with constant prior mean `mean_const`.
    ///
    /// The nugget starts at `kernel.nugget`; if the Gram matrix fails to
    /// factor it escalates by factors of 10 (from at least 1e-10) up to
    /// 1e-4 before giving up. The escalated value is recorded in the
    /// returned model's kernel config.
    pub fn fit(
        kernel: &KernelConfig,
        xs: &[Vec<f64>],
        ys: &[f64],
        mean_const: f64,
    ) -> Result<Self> {
        let t = xs.len();
        if t == 0 {
            return Err(Error::EmptyDataset);
        }
        if ys.len() != t {
            return Err(Error::DimensionMismatch {
                expected: t,
                got: ys.len(),
            });
        }
        for x in xs {
            if x.len() != kernel.dim() {
                return Err(Error::DimensionMismatch {
                    expected: kernel.dim(),
                    got: x.len(),
                });
            }
        }
        for (i, a) in xs.iter().enumerate() {
            if let Some(j) = xs[..i].iter().position(|b| a == b) {
                return Err(Error::DuplicateSample { index: j });
            }
        }

        let mut gram = DMatrix::zeros(t, t);
        for i in 0..t {
            for j in 0..=i {
                let k = kernel.eval_unchecked(&xs[i], &xs[j]);
                gram[(i, j)] = k;
                gram[(j, i)] = k;
            }
        }

        let mut nugget = kernel.nugget;
        let (chol_factor, effective_nugget) = loop {
            let mut m = gram.clone();
            for i in 0..t {
                m[(i, i)] += nugget;
            }
            match nalgebra::Cholesky::new(m) {
                Some(chol) => break (chol.unpack(), nugget),
                None => {
                    let next = if nugget < NUGGET_FLOOR {
                        NUGGET_FLOOR
                    } else {
                        nugget * 10.0
                    };
                    if next > NUGGET_CEILING {
                        return Err(Error::NotPositiveDefinite { nugget });
                    }
                    nugget = next;
                }
            }
        };

        let residual = DVector::from_iterator(t, ys.iter().map(|y| y - mean_const));
        let mut alpha_weights = chol_factor
            .solve_lower_triangular(&residual)
            .ok_or(Error::NotPositiveDefinite {
                nugget: effective_nugget,
            })?;
        alpha_weights = chol_factor
            .transpose()
            .solve_upper_triangular(&alpha_weights)
            .ok_or(Error::NotPositiveDefinite {
                nugget: effective_nugget,
            })?;

        let log_det_half: f64 = (0..t).map(|i| chol_factor[(i, i)].ln()).sum();
        let log_marginal_likelihood = -0.5 * residual.dot(&alpha_weights)
            - log_det_half
            - 0.5 * t as f64 * (2.0 * std::f64::consts::PI).ln();

        let mut kernel = kernel.clone();
        kernel.nugget = effective_nugget;
        Ok(Self {
            kernel,
            train_x: xs.to_vec(),
            train_y: ys.to_vec(),
            mean_const,
            chol_factor,
            alpha_weights,
            log_marginal_likelihood,
        })
    }

    pub fn kernel(&self) -> &KernelConfig {
        &self.kernel
    }

    pub fn train_len(&self) -> usize {
        self.train_x.len()
    }

    pub fn train_x(&self) -> &[Vec<f64>] {
        &self.train_x
    }

    pub fn train_y(&self) -> &[f64] {
        &self.train_y
    }

    pub fn mean_const(&self) -> f64 {
        self.mean_const
    }

    /// Lower-triangular factor `L` with `L L^T = K + nugget * I`.
    pub fn chol_factor(&self) -> &DMatrix<f64> {
        &self.chol_factor
    }

    /// Log marginal likelihood of the training data under this model.
    pub fn log_marginal_likelihood(&self) -> f64 {
        self.log_marginal_likelihood
    }

    /// Posterior mean and standard deviation at `x`. The variance is
    /// clamped at zero before the square root.
    pub fn predict(&self, x: &[f64]) -> (f64, f64) {
        debug_assert_eq!(x.len(), self.kernel.dim());
        let t = self.train_x.len();
        let k_star =
            DVector::from_iterator(t, self.train_x.iter().map(|xi| self.kernel.eval_unchecked(xi, x)));
        let mu = self.mean_const + k_star.dot(&self.alpha_weights);
        let v = self
            .chol_factor
            .solve_lower_triangular(&k_star)
            .expect("Cholesky factor has positive diagonal");
        let var = (self.kernel.signal_variance - v.norm_squared()).max(0.0);
        (mu, var.sqrt())
    }

    /// Batch prediction; one triangular solve for all points at once.
    pub fn predict_batch(&self, points: &[Vec<f64>]) -> Vec<(f64, f64)> {
        let t = self.train_x.len();
        let n = points.len();
        if n == 0 {
            return Vec::new();
        }
        let mut k_star = DMatrix::zeros(t, n);
        for (j, p) in points.iter().enumerate() {
            for (i, xi) in self.train_x.iter().enumerate() {
                k_star[(i, j)] = self.kernel.eval_unchecked(xi, p);
            }
        }
        let v = self
            .chol_factor
            .solve_lower_triangular(&k_star)
            .expect("Cholesky factor has positive diagonal");
        (0..n)
            .map(|j| {
                let mu = self.mean_const + k_star.column(j).dot(&self.alpha_weights);
                let var = (self.kernel.signal_variance - v.column(j).norm_squared()).max(0.0);
                (mu, var.sqrt())
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gp::kernel::KernelFamily;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn matern(n: usize, nugget: f64) -> KernelConfig {
        KernelConfig::new(KernelFamily::Matern52, vec![0.4; n], 1.5, nugget).unwrap()
    }

    #[test]
    fn single_point_interpolates() {
        let model = SurrogateModel::fit(&matern(1, 0.0), &[vec![0.3]], &[5.0], 0.0).unwrap();
        let (mu, sigma) = model.predict(&[0.3]);
        assert!((mu - 5.0).abs() < 1e-9);
        assert!(sigma < 1e-5);
    }

    #[test]
    fn symmetric_inputs_give_equal_predictions() {
        let xs = vec![vec![-1.0], vec![1.0]];
        let model = SurrogateModel::fit(&matern(1, 1e-10), &xs, &[2.0, 2.0], 0.0).unwrap();
        let (mu0, s0) = model.predict(&[-1.0]);
        let (mu1, s1) = model.predict(&[1.0]);
        assert!((mu0 - mu1).abs() < 1e-10);
        assert!((s0 - s1).abs() < 1e-10);
    }

    #[test]
    fn cholesky_reconstruction_is_tight() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let xs: Vec<Vec<f64>> = (0..8)
            .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
            .collect();
        let ys: Vec<f64> = (0..8).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let cfg = matern(2, 1e-10);
        let model = SurrogateModel::fit(&cfg, &xs, &ys, 0.0).unwrap();

        // direct matrix multiply oracle
        let t = xs.len();
        let mut k = DMatrix::zeros(t, t);
        for i in 0..t {
            for j in 0..t {
                k[(i, j)] = crate::gp::kernel_eval(&cfg, &xs[i], &xs[j]).unwrap();
            }
        }
        let mut k_jittered = k.clone();
        for i in 0..t {
            k_jittered[(i, i)] += model.kernel().nugget;
        }
        let l = model.chol_factor();
        let reconstruction = l * l.transpose();
        let err = (&reconstruction - &k_jittered).norm() / k.norm();
        assert!(err < 1e-10, "relative reconstruction error {err}");

        // lower triangular with strictly positive diagonal
        for i in 0..t {
            assert!(l[(i, i)] > 0.0);
            for j in (i + 1)..t {
                assert_eq!(l[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn far_point_recovers_prior() {
        let xs = vec![vec![0.0], vec![0.5]];
        let model = SurrogateModel::fit(&matern(1, 1e-10), &xs, &[1.0, -1.0], 0.0).unwrap();
        let (mu, sigma) = model.predict(&[1e6]);
        assert!(mu.abs() < 1e-9);
        assert!((sigma - 1.5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn predict_matches_naive_inversion() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for trial in 0..20 {
            let t = 5;
            let xs: Vec<Vec<f64>> = (0..t)
                .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
                .collect();
            let ys: Vec<f64> = (0..t).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let mean_const = 0.3;
            let cfg = KernelConfig::new(
                KernelFamily::SquaredExponential,
                vec![0.6, 0.8],
                2.0,
                1e-9,
            )
            .unwrap();
            let model = SurrogateModel::fit(&cfg, &xs, &ys, mean_const).unwrap();
            let x = vec![rng.random::<f64>(), rng.random::<f64>()];

            // naive-inversion oracle for the posterior formulas
            let mut k = DMatrix::zeros(t, t);
            for i in 0..t {
                for j in 0..t {
                    k[(i, j)] = crate::gp::kernel_eval(&cfg, &xs[i], &xs[j]).unwrap();
                }
            }
            for i in 0..t {
                k[(i, i)] += cfg.nugget;
            }
            let k_inv = k.try_inverse().unwrap();
            let k_star = DVector::from_iterator(
                t,
                xs.iter().map(|xi| crate::gp::kernel_eval(&cfg, xi, &x).unwrap()),
            );
            let resid = DVector::from_iterator(t, ys.iter().map(|y| y - mean_const));
            let mu_direct = mean_const + k_star.dot(&(&k_inv * &resid));
            let var_direct = cfg.signal_variance - k_star.dot(&(&k_inv * &k_star));

            let (mu, sigma) = model.predict(&x);
            assert!((mu - mu_direct).abs() < 1e-8, "trial {trial}: mean");
            assert!(
                (sigma * sigma - var_direct.max(0.0)).abs() < 1e-8,
                "trial {trial}: variance"
            );
        }
    }

    #[test]
    fn batch_prediction_matches_single() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let xs: Vec<Vec<f64>> = (0..10)
            .map(|_| vec![rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()])
            .collect();
        let ys: Vec<f64> = (0..10).map(|_| rng.random::<f64>()).collect();
        let model = SurrogateModel::fit(&matern(3, 1e-10), &xs, &ys, 0.0).unwrap();
        let points: Vec<Vec<f64>> = (0..17)
            .map(|_| vec![rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()])
            .collect();
        let batch = model.predict_batch(&points);
        for (p, (mu_b, s_b)) in points.iter().zip(&batch) {
            let (mu, s) = model.predict(p);
            assert!((mu - mu_b).abs() < 1e-12);
            assert!((s - s_b).abs() < 1e-12);
        }
    }

    #[test]
    fn nan_input_fails_after_escalation() {
        let xs = vec![vec![f64::NAN], vec![0.5]];
        let err = SurrogateModel::fit(&matern(1, 0.0), &xs, &[1.0, 2.0], 0.0);
        assert!(matches!(err, Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn duplicate_rows_rejected() {
        let xs = vec![vec![0.5, 0.5], vec![0.5, 0.5]];
        assert!(matches!(
            SurrogateModel::fit(&matern(2, 0.0), &xs, &[1.0, 1.0], 0.0),
            Err(Error::DuplicateSample { index: 0 })
        ));
    }
}
