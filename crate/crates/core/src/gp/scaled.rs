//! Domain-aware surrogate fitting: inputs are rescaled to `[0, 1]^n`
//! using the domain bounds and targets are standardized to zero mean and
//! unit variance before fitting, so one hyperparameter search box serves
//! every problem. Predictions are mapped back to original units.

use crate::error::Result;
use crate::gp::hyper::{fit_hyperparameters, HyperSearchConfig};
use crate::gp::model::SurrogateModel;
use crate::problem::BoundedDomain;

/// A fitted GP together with the affine input/output transforms applied
/// around it. Prediction accepts and returns original units.
#[derive(Debug, Clone)]
pub struct ScaledSurrogate {
    model: SurrogateModel,
    domain: BoundedDomain,
    y_mean: f64,
    y_std: f64,
}

impl ScaledSurrogate {
    /// Selects hyperparameters and fits a GP on `(xs, ys)` given in
    /// original units. The prior mean is the constant 0 in standardized
    /// space, i.e. the sample mean of `ys`.
    pub fn fit(
        domain: &BoundedDomain,
        xs: &[Vec<f64>],
        ys: &[f64],
        search: &HyperSearchConfig,
    ) -> Result<Self> {
        let t = ys.len();
        let mean = ys.iter().sum::<f64>() / t as f64;
        let var = ys.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / t as f64;
        let y_std = if var.sqrt() > 1e-12 { var.sqrt() } else { 1.0 };
        let y_mean = 0.0;

        let xs_norm: Vec<Vec<f64>> = xs.iter().map(|x| domain.normalize(x)).collect();
        let ys_std: Vec<f64> = ys.iter().map(|y| (y - y_mean) / y_std).collect();

        let kernel = fit_hyperparameters(&xs_norm, &ys_std, 0.0, search)?;
        let model = SurrogateModel::fit(&kernel, &xs_norm, &ys_std, 0.0)?;
        Ok(Self {
            model,
            domain: domain.clone(),
            y_mean,
            y_std,
        })
    }

    pub fn model(&self) -> &SurrogateModel {
        &self.model
    }

    /// Posterior mean and standard deviation at `x` in original units.
    pub fn predict(&self, x: &[f64]) -> (f64, f64) {
        let (mu, sigma) = self.model.predict(&self.domain.normalize(x));
        (self.y_mean + self.y_std * mu, self.y_std * sigma)
    }

    pub fn predict_batch(&self, points: &[Vec<f64>]) -> Vec<(f64, f64)> {
        let normalized: Vec<Vec<f64>> = points.iter().map(|p| self.domain.normalize(p)).collect();
        self.model
            .predict_batch(&normalized)
            .into_iter()
            .map(|(mu, sigma)| (self.y_mean + self.y_std * mu, self.y_std * sigma))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn interpolates_in_original_units() {
        let domain = BoundedDomain::cube(2, -5.0, 15.0).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let xs: Vec<Vec<f64>> = (0..12)
            .map(|_| vec![rng.random_range(-5.0..15.0), rng.random_range(-5.0..15.0)])
            .collect();
        let ys: Vec<f64> = xs.iter().map(|x| 40.0 + x[0].sin() * 3.0 + x[1]).collect();
        let surr =
            ScaledSurrogate::fit(&domain, &xs, &ys, &HyperSearchConfig::default()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            let (mu, _) = surr.predict(x);
            assert!((mu - y).abs() < 1e-6, "predicted {mu}, observed {y}");
        }
    }

    #[test]
    fn constant_targets_do_not_divide_by_zero() {
        let domain = BoundedDomain::cube(1, 0.0, 1.0).unwrap();
        let xs: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64 / 4.0]).collect();
        let ys = vec![3.25; 5];
        let surr =
            ScaledSurrogate::fit(&domain, &xs, &ys, &HyperSearchConfig::default()).unwrap();
        let (mu, sigma) = surr.predict(&[0.5]);
        assert!((mu - 3.25).abs() < 1e-6);
        assert!(sigma.is_finite());
    }
}
