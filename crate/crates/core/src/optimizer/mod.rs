//! The sequential optimization loops: merit constrained Bayesian
//! optimization (MCBO) with either EMI form, unified constrained
//! Bayesian optimization (UCBO) with the feasibility-driven beta switch,
//! and the ECI baseline with Latin hypercube resampling.
//!
//! Every run is deterministic given `(problem, config)`: initialization,
//! candidate generation and hyperparameter search all draw from streams
//! derived from the config seed, so independent runs can execute on any
//! number of threads without changing results.

mod lhs;
mod maximize;

pub use lhs::latin_hypercube;
pub use maximize::{maximize_acquisition, MaximizerConfig};

use serde::{Deserialize, Serialize};

use crate::acquisition::{
    eci, emi_form1, emi_form2, expected_improvement, ueci, AcquisitionKind, AcquisitionSpec,
    MeritIncumbent, PosteriorBundle,
};
use crate::error::{Error, Result};
use crate::gp::{HyperSearchConfig, ScaledSurrogate};
use crate::problem::{BoundedDomain, Dataset, Problem, Sample};

const STREAM_INIT: u64 = 1;
const STREAM_CANDIDATES: u64 = 2;
const STREAM_HYPER: u64 = 3;
const STREAM_RESAMPLE: u64 = 4;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent child seed from a base seed and a stream path.
pub(crate) fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut state = splitmix64(base);
    for p in parts {
        state = splitmix64(state ^ splitmix64(*p));
    }
    state
}

/// Penalty update rule applied across iterations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AlphaUpdate {
    /// Keep the initial alpha for the whole run.
    Constant,
    /// After each evaluation, multiply alpha_j by `factor` whenever the
    /// newest sample violates constraint j, clipping at `cap`.
    MultiplyOnInfeasible { factor: f64, cap: f64 },
    /// Piecewise-constant alpha by iteration index; each phase applies
    /// from its `start_iteration` until the next phase begins.
    Piecewise(Vec<AlphaPhase>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaPhase {
    pub start_iteration: usize,
    pub alpha: Vec<f64>,
}

/// State handed to [`update_alpha`]: the iteration index and, after an
/// evaluation, the newest sample.
#[derive(Debug, Clone, Copy)]
pub struct AlphaUpdateContext<'a> {
    pub iteration: usize,
    pub latest_sample: Option<&'a Sample>,
}

/// Applies the penalty update rule.
pub fn update_alpha(current: &[f64], rule: &AlphaUpdate, ctx: &AlphaUpdateContext) -> Vec<f64> {
    match rule {
        AlphaUpdate::Constant => current.to_vec(),
        AlphaUpdate::MultiplyOnInfeasible { factor, cap } => match ctx.latest_sample {
            None => current.to_vec(),
            Some(sample) => current
                .iter()
                .zip(&sample.c_values)
                .map(|(a, c)| if *c < 0.0 { (a * factor).min(*cap) } else { *a })
                .collect(),
        },
        AlphaUpdate::Piecewise(phases) => {
            let mut alpha = current.to_vec();
            for phase in phases {
                if phase.start_iteration <= ctx.iteration {
                    alpha = phase.alpha.clone();
                }
            }
            alpha
        }
    }
}

/// Full configuration of one optimization run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopConfig {
    pub acquisition: AcquisitionSpec,
    /// Latin hypercube initialization size.
    pub n_initial: usize,
    /// Evaluations after initialization.
    pub budget: usize,
    pub seed: u64,
    pub maximizer: MaximizerConfig,
    pub alpha_update: AlphaUpdate,
    /// Hyperparameter search settings; its `seed` field is ignored and
    /// replaced by a stream derived from the run seed each iteration.
    pub hyper: HyperSearchConfig,
}

impl LoopConfig {
    pub fn new(acquisition: AcquisitionSpec) -> Self {
        Self {
            acquisition,
            n_initial: 4,
            budget: 50,
            seed: 0,
            maximizer: MaximizerConfig::default(),
            alpha_update: AlphaUpdate::Constant,
            hyper: HyperSearchConfig::default(),
        }
    }

    pub fn validate(&self, constraint_count: usize) -> Result<()> {
        self.acquisition.validate()?;
        if self.n_initial < 1 {
            return Err(Error::InvalidConfig("n_initial must be >= 1".into()));
        }
        if self.budget < 1 {
            return Err(Error::InvalidConfig("budget must be >= 1".into()));
        }
        if self.maximizer.candidate_count < 1 {
            return Err(Error::InvalidConfig("candidate_count must be >= 1".into()));
        }
        let needs_alpha = matches!(
            self.acquisition.kind,
            AcquisitionKind::Emi1 | AcquisitionKind::Emi2 | AcquisitionKind::Ueci
        );
        if needs_alpha && self.acquisition.alpha.len() != constraint_count {
            return Err(Error::DimensionMismatch {
                expected: constraint_count,
                got: self.acquisition.alpha.len(),
            });
        }
        Ok(())
    }
}

/// One evaluation in a run: what was sampled, what came back and the
/// algorithm state active when the point was chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub eval_index: usize,
    /// True for the Latin hypercube initialization block.
    pub initial: bool,
    pub x: Vec<f64>,
    pub f_value: f64,
    pub c_values: Vec<f64>,
    pub feasible: bool,
    /// Running best feasible objective, absent until a feasible sample
    /// exists.
    pub best_feasible_f: Option<f64>,
    /// UCBO's active beta; `None` for other algorithms and during
    /// initialization.
    pub beta_active: Option<f64>,
    pub alpha_active: Vec<f64>,
}

/// Complete record of one run: every evaluation in order plus the
/// terminal dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub records: Vec<TraceRecord>,
    pub n_initial: usize,
    pub dataset: Dataset,
}

impl RunTrace {
    /// Best feasible objective after the last evaluation.
    pub fn final_best_feasible(&self) -> Option<f64> {
        self.records.last().and_then(|r| r.best_feasible_f)
    }

    /// Number of evaluations consumed before the first feasible sample
    /// (1-based), or `None` if the run never found one.
    pub fn first_feasible_evaluation(&self) -> Option<usize> {
        self.records
            .iter()
            .position(|r| r.feasible)
            .map(|i| i + 1)
    }
}

struct FittedModels {
    objective: ScaledSurrogate,
    constraints: Vec<ScaledSurrogate>,
}

fn fit_models(
    domain: &BoundedDomain,
    dataset: &Dataset,
    config: &LoopConfig,
    iteration: usize,
) -> Result<FittedModels> {
    let xs: Vec<Vec<f64>> = dataset.samples().iter().map(|s| s.x.clone()).collect();
    let fit_one = |values: Vec<f64>, stream: u64| -> Result<ScaledSurrogate> {
        let search = HyperSearchConfig {
            seed: derive_seed(config.seed, &[STREAM_HYPER, iteration as u64, stream]),
            ..config.hyper.clone()
        };
        ScaledSurrogate::fit(domain, &xs, &values, &search)
    };
    let objective = fit_one(
        dataset.samples().iter().map(|s| s.f_value).collect(),
        0,
    )?;
    let constraints = (0..dataset.constraint_count())
        .map(|j| {
            fit_one(
                dataset.samples().iter().map(|s| s.c_values[j]).collect(),
                j as u64 + 1,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FittedModels {
        objective,
        constraints,
    })
}

/// Fits fresh surrogates on the dataset and maximizes the configured
/// acquisition, returning the proposed next sample point.
///
/// `iteration` indexes evaluations after initialization and pins the
/// candidate and hyperparameter seed streams, so replaying an iteration
/// with the same dataset, seed and acquisition state reproduces the
/// selected point exactly.
pub fn select_next(
    domain: &BoundedDomain,
    dataset: &Dataset,
    config: &LoopConfig,
    alpha: &[f64],
    beta: Option<f64>,
    iteration: usize,
) -> Result<Vec<f64>> {
    let models = fit_models(domain, dataset, config, iteration)?;
    let spec = &config.acquisition;
    let xi = spec.xi;

    let scorer: Box<dyn Fn(&PosteriorBundle) -> f64> = match spec.kind {
        AcquisitionKind::Ei => {
            let incumbent = dataset
                .samples()
                .iter()
                .map(|s| s.f_value)
                .fold(f64::INFINITY, f64::min);
            Box::new(move |bundle| expected_improvement(bundle.objective, incumbent, xi))
        }
        AcquisitionKind::Eci => {
            let (_, incumbent) = dataset
                .best_feasible()
                .ok_or(Error::MissingFeasibleIncumbent)?;
            Box::new(move |bundle| eci(bundle, incumbent, xi))
        }
        AcquisitionKind::Emi1 => {
            let incumbent = MeritIncumbent::from_dataset(dataset, alpha)?;
            let alpha = alpha.to_vec();
            Box::new(move |bundle| emi_form1(bundle, &incumbent, &alpha, xi))
        }
        AcquisitionKind::Emi2 => {
            let (_, incumbent_merit) = dataset.best_merit(alpha)?;
            let alpha = alpha.to_vec();
            Box::new(move |bundle| emi_form2(bundle, incumbent_merit, &alpha))
        }
        AcquisitionKind::Ueci => {
            let beta = beta.ok_or_else(|| {
                Error::InvalidConfig("UECI selection needs an active beta".into())
            })?;
            let merit_incumbent = MeritIncumbent::from_dataset(dataset, alpha)?;
            let feasible_f = dataset.best_feasible().map(|(_, f)| f);
            if beta < 1.0 && feasible_f.is_none() {
                return Err(Error::MissingFeasibleIncumbent);
            }
            let alpha = alpha.to_vec();
            Box::new(move |bundle| {
                ueci(bundle, feasible_f, &merit_incumbent, &alpha, beta, xi)
                    .expect("feasible incumbent was checked before the scan")
            })
        }
    };

    let score_batch = |points: &[Vec<f64>]| -> Vec<f64> {
        let objective = models.objective.predict_batch(points);
        let constraints: Vec<Vec<(f64, f64)>> = models
            .constraints
            .iter()
            .map(|m| m.predict_batch(points))
            .collect();
        let mut bundle = PosteriorBundle {
            objective: (0.0, 0.0),
            constraints: vec![(0.0, 0.0); constraints.len()],
        };
        (0..points.len())
            .map(|i| {
                bundle.objective = objective[i];
                for (slot, series) in bundle.constraints.iter_mut().zip(&constraints) {
                    *slot = series[i];
                }
                scorer(&bundle)
            })
            .collect()
    };

    let candidate_seed = derive_seed(config.seed, &[STREAM_CANDIDATES, iteration as u64]);
    Ok(maximize_acquisition(
        &score_batch,
        domain,
        &config.maximizer,
        dataset,
        candidate_seed,
    ))
}

struct LoopState<'a> {
    problem: &'a Problem,
    dataset: Dataset,
    records: Vec<TraceRecord>,
    best_feasible_f: Option<f64>,
}

impl<'a> LoopState<'a> {
    fn init(problem: &'a Problem, config: &LoopConfig) -> Result<Self> {
        let mut state = Self {
            problem,
            dataset: Dataset::new(problem.dim(), problem.constraint_count()),
            records: Vec::with_capacity(config.n_initial + config.budget),
            best_feasible_f: None,
        };
        let init_seed = derive_seed(config.seed, &[STREAM_INIT]);
        for x in latin_hypercube(problem.domain(), config.n_initial, init_seed) {
            state.evaluate_and_record(x, true, None, &config.acquisition.alpha)?;
        }
        Ok(state)
    }

    fn evaluate_and_record(
        &mut self,
        x: Vec<f64>,
        initial: bool,
        beta_active: Option<f64>,
        alpha_active: &[f64],
    ) -> Result<&Sample> {
        let sample = self.problem.evaluate(&x)?;
        if sample.feasible {
            self.best_feasible_f = Some(match self.best_feasible_f {
                Some(best) => best.min(sample.f_value),
                None => sample.f_value,
            });
        }
        self.records.push(TraceRecord {
            eval_index: self.records.len(),
            initial,
            x: sample.x.clone(),
            f_value: sample.f_value,
            c_values: sample.c_values.clone(),
            feasible: sample.feasible,
            best_feasible_f: self.best_feasible_f,
            beta_active,
            alpha_active: alpha_active.to_vec(),
        });
        self.dataset.push(sample)?;
        Ok(self.dataset.samples().last().expect("just pushed"))
    }

    fn into_trace(self, n_initial: usize) -> RunTrace {
        RunTrace {
            records: self.records,
            n_initial,
            dataset: self.dataset,
        }
    }
}

/// Merit constrained Bayesian optimization (EMI form 1 or 2): Latin
/// hypercube initialization, then per iteration a surrogate refit, merit
/// incumbent selection, acquisition maximization and evaluation, with
/// the alpha update rule applied as configured.
pub fn run_mcbo(problem: &Problem, config: &LoopConfig) -> Result<RunTrace> {
    if !matches!(
        config.acquisition.kind,
        AcquisitionKind::Emi1 | AcquisitionKind::Emi2
    ) {
        return Err(Error::InvalidConfig(
            "run_mcbo requires an EMI acquisition".into(),
        ));
    }
    config.validate(problem.constraint_count())?;
    let mut state = LoopState::init(problem, config)?;
    let mut alpha = config.acquisition.alpha.clone();
    for k in 0..config.budget {
        alpha = update_alpha(
            &alpha,
            &config.alpha_update,
            &AlphaUpdateContext {
                iteration: k,
                latest_sample: None,
            },
        );
        let x = select_next(problem.domain(), &state.dataset, config, &alpha, None, k)?;
        let sample = state.evaluate_and_record(x, false, None, &alpha)?;
        alpha = update_alpha(
            &alpha,
            &config.alpha_update,
            &AlphaUpdateContext {
                iteration: k,
                latest_sample: Some(sample),
            },
        );
    }
    Ok(state.into_trace(config.n_initial))
}

/// Unified constrained Bayesian optimization: UECI with beta starting at
/// 1 and dropping to 0 at the top of the first iteration where the
/// feasible sample count reaches the configured threshold.
pub fn run_ucbo(problem: &Problem, config: &LoopConfig) -> Result<RunTrace> {
    if config.acquisition.kind != AcquisitionKind::Ueci {
        return Err(Error::InvalidConfig(
            "run_ucbo requires the UECI acquisition".into(),
        ));
    }
    config.validate(problem.constraint_count())?;
    let mut state = LoopState::init(problem, config)?;
    let mut alpha = config.acquisition.alpha.clone();
    let mut beta = 1.0;
    for k in 0..config.budget {
        if state.dataset.feasible_count() >= config.acquisition.feasible_threshold {
            beta = 0.0;
        }
        alpha = update_alpha(
            &alpha,
            &config.alpha_update,
            &AlphaUpdateContext {
                iteration: k,
                latest_sample: None,
            },
        );
        let x = select_next(
            problem.domain(),
            &state.dataset,
            config,
            &alpha,
            Some(beta),
            k,
        )?;
        let sample = state.evaluate_and_record(x, false, Some(beta), &alpha)?;
        alpha = update_alpha(
            &alpha,
            &config.alpha_update,
            &AlphaUpdateContext {
                iteration: k,
                latest_sample: Some(sample),
            },
        );
    }
    Ok(state.into_trace(config.n_initial))
}

/// ECI baseline: after initialization, fresh Latin hypercube batches are
/// evaluated one point at a time (consuming budget) until a feasible
/// sample exists, then ECI iterations proceed with the feasible
/// incumbent. Exhausting the budget without feasibility is not an error;
/// the trace simply carries no best-feasible values.
pub fn run_eci_baseline(problem: &Problem, config: &LoopConfig) -> Result<RunTrace> {
    if config.acquisition.kind != AcquisitionKind::Eci {
        return Err(Error::InvalidConfig(
            "run_eci_baseline requires the ECI acquisition".into(),
        ));
    }
    config.validate(problem.constraint_count())?;
    let mut state = LoopState::init(problem, config)?;
    let alpha = config.acquisition.alpha.clone();
    let mut used = 0;
    let mut batch_index = 0u64;
    'resample: while used < config.budget && state.best_feasible_f.is_none() {
        let batch_seed = derive_seed(config.seed, &[STREAM_RESAMPLE, batch_index]);
        batch_index += 1;
        for x in latin_hypercube(problem.domain(), config.n_initial, batch_seed) {
            if used >= config.budget {
                break 'resample;
            }
            let sample = state.evaluate_and_record(x, false, None, &alpha)?;
            used += 1;
            if sample.feasible {
                break 'resample;
            }
        }
    }
    while used < config.budget {
        let x = select_next(
            problem.domain(),
            &state.dataset,
            config,
            &alpha,
            None,
            used,
        )?;
        state.evaluate_and_record(x, false, None, &alpha)?;
        used += 1;
    }
    Ok(state.into_trace(config.n_initial))
}

/// Dispatches to the runner matching the configured acquisition.
pub fn run(problem: &Problem, config: &LoopConfig) -> Result<RunTrace> {
    match config.acquisition.kind {
        AcquisitionKind::Emi1 | AcquisitionKind::Emi2 => run_mcbo(problem, config),
        AcquisitionKind::Ueci => run_ucbo(problem, config),
        AcquisitionKind::Eci => run_eci_baseline(problem, config),
        AcquisitionKind::Ei => Err(Error::InvalidConfig(
            "plain EI has no constrained runner; use select_next directly".into(),
        )),
    }
}
