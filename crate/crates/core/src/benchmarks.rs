//! The synthetic benchmark problems with their per-algorithm presets and
//! the brute-force oracles establishing reference optima.
//!
//! `ex1` is a classic 2D sine problem with a tiny feasible region and
//! well-separated local/global minima; `ex2` is 2D with two constraints;
//! `ex4d` is a 4D problem whose single constraint is a scaled Hartmann
//! surface. Reference optima are frozen constants: `ex1`'s value is the
//! one reported in the literature for this problem, `ex2`'s comes from a
//! dense-grid search and `ex4d`'s from feasible sampling plus pattern
//! search refinement; the oracles here recompute them on demand.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::acquisition::{AcquisitionKind, AcquisitionSpec};
use crate::error::{Error, Result};
use crate::optimizer::{AlphaPhase, AlphaUpdate, LoopConfig};
use crate::problem::{BoundedDomain, Problem};

/// The four algorithms the experiment harness compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    Emi1,
    Emi2,
    Ucbo,
    Eci,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Emi1,
        Algorithm::Emi2,
        Algorithm::Ucbo,
        Algorithm::Eci,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Emi1 => "emi1",
            Algorithm::Emi2 => "emi2",
            Algorithm::Ucbo => "ucbo",
            Algorithm::Eci => "eci",
        }
    }

    pub fn from_name(name: &str) -> Option<Algorithm> {
        match name.to_ascii_lowercase().as_str() {
            "emi1" => Some(Algorithm::Emi1),
            "emi2" => Some(Algorithm::Emi2),
            "ucbo" => Some(Algorithm::Ucbo),
            "eci" => Some(Algorithm::Eci),
            _ => None,
        }
    }

    pub fn acquisition_kind(&self) -> AcquisitionKind {
        match self {
            Algorithm::Emi1 => AcquisitionKind::Emi1,
            Algorithm::Emi2 => AcquisitionKind::Emi2,
            Algorithm::Ucbo => AcquisitionKind::Ueci,
            Algorithm::Eci => AcquisitionKind::Eci,
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a reference optimum comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    /// Value as reported in the literature for this classic problem.
    Reported,
    /// Minimum over a dense feasible grid.
    GridOracle,
    /// Minimum over uniform feasible samples, refined by pattern search.
    SamplingOracle,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Provenance::Reported => "reported",
            Provenance::GridOracle => "dense-grid oracle",
            Provenance::SamplingOracle => "sampling+refinement oracle",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceOptimum {
    pub value: f64,
    pub provenance: Provenance,
    /// A feasible point attaining (approximately) the reference value.
    pub point: Vec<f64>,
}

/// A benchmark problem bundled with its reference optimum and the
/// per-algorithm loop presets.
pub struct BenchmarkDef {
    pub name: &'static str,
    pub problem: Problem,
    pub reference: ReferenceOptimum,
    budgets: fn(Algorithm) -> usize,
    presets: fn(Algorithm) -> (AcquisitionSpec, AlphaUpdate),
}

/// Machine-readable description of a benchmark for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkDescription {
    pub name: String,
    pub dimension: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub constraint_count: usize,
    pub reference_optimum: f64,
    pub reference_provenance: String,
}

impl BenchmarkDef {
    /// The §-style preset for an algorithm: acquisition parameters,
    /// alpha schedule and budget, with shared defaults elsewhere.
    pub fn default_config(&self, algorithm: Algorithm) -> LoopConfig {
        let (acquisition, alpha_update) = (self.presets)(algorithm);
        let mut config = LoopConfig::new(acquisition);
        config.budget = (self.budgets)(algorithm);
        config.alpha_update = alpha_update;
        config
    }

    pub fn describe(&self) -> BenchmarkDescription {
        BenchmarkDescription {
            name: self.name.to_string(),
            dimension: self.problem.dim(),
            lower: self.problem.domain().lower().to_vec(),
            upper: self.problem.domain().upper().to_vec(),
            constraint_count: self.problem.constraint_count(),
            reference_optimum: self.reference.value,
            reference_provenance: self.reference.provenance.to_string(),
        }
    }
}

pub fn names() -> &'static [&'static str] {
    &["ex1", "ex2", "ex4d"]
}

pub fn by_name(name: &str) -> Result<BenchmarkDef> {
    match name.to_ascii_lowercase().as_str() {
        "ex1" => Ok(ex1()),
        "ex2" => Ok(ex2()),
        "ex4d" => Ok(ex4d()),
        other => Err(Error::InvalidConfig(format!("unknown benchmark '{other}'"))),
    }
}

fn spec_with(kind: AcquisitionKind, alpha: Vec<f64>, n_f: usize) -> AcquisitionSpec {
    let mut spec = AcquisitionSpec::new(kind, alpha);
    spec.feasible_threshold = n_f;
    spec
}

// ---------------------------------------------------------------------
// ex1: minimize sin(x1) + x2 on [0,6]^2 s.t. -sin(x1) sin(x2) - 0.95 >= 0
// ---------------------------------------------------------------------

fn ex1_objective(x: &[f64]) -> f64 {
    x[0].sin() + x[1]
}

fn ex1_constraint(x: &[f64]) -> f64 {
    -x[0].sin() * x[1].sin() - 0.95
}

pub fn ex1() -> BenchmarkDef {
    let problem = Problem::new(
        BoundedDomain::cube(2, 0.0, 6.0).unwrap(),
        Box::new(ex1_objective),
        vec![Box::new(ex1_constraint)],
    );
    BenchmarkDef {
        name: "ex1",
        problem,
        reference: ReferenceOptimum {
            value: 0.25,
            provenance: Provenance::Reported,
            // (3pi/2, asin 0.95), backed off the boundary by 1e-9
            point: vec![4.712_388_980_384_69, 1.253_235_898_503_375_1],
        },
        budgets: |algorithm| match algorithm {
            Algorithm::Eci => 100,
            _ => 60,
        },
        presets: |algorithm| match algorithm {
            Algorithm::Emi1 => (
                spec_with(AcquisitionKind::Emi1, vec![20.0], 1),
                AlphaUpdate::Constant,
            ),
            Algorithm::Emi2 => (
                spec_with(AcquisitionKind::Emi2, vec![5.0], 1),
                AlphaUpdate::Constant,
            ),
            Algorithm::Ucbo => (
                spec_with(AcquisitionKind::Ueci, vec![20.0], 2),
                AlphaUpdate::Constant,
            ),
            Algorithm::Eci => (
                spec_with(AcquisitionKind::Eci, vec![0.0], 1),
                AlphaUpdate::Constant,
            ),
        },
    }
}

/// Minimum objective over uniform feasible samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub value: f64,
    pub point: Vec<f64>,
    pub feasible_fraction: f64,
}

pub fn ex1_sampling_oracle(samples: usize, seed: u64) -> OracleResult {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    let mut best_point = vec![f64::NAN; 2];
    let mut feasible = 0usize;
    for _ in 0..samples {
        let x = [rng.random_range(0.0..6.0), rng.random_range(0.0..6.0)];
        if ex1_constraint(&x) >= 0.0 {
            feasible += 1;
            let f = ex1_objective(&x);
            if f < best {
                best = f;
                best_point = x.to_vec();
            }
        }
    }
    OracleResult {
        value: best,
        point: best_point,
        feasible_fraction: feasible as f64 / samples as f64,
    }
}

// ---------------------------------------------------------------------
// ex2: minimize x1 + x2 on [0,1]^2 s.t.
//   0.5 sin(2 pi (x1^2 - 2 x2)) + x1 + 2 x2 - 1.5 >= 0
//   -x1^2 - x2^2 + 1.5 >= 0
// ---------------------------------------------------------------------

fn ex2_objective(x: &[f64]) -> f64 {
    x[0] + x[1]
}

fn ex2_constraint1(x: &[f64]) -> f64 {
    0.5 * (2.0 * std::f64::consts::PI * (x[0] * x[0] - 2.0 * x[1])).sin() + x[0] + 2.0 * x[1]
        - 1.5
}

fn ex2_constraint2(x: &[f64]) -> f64 {
    -x[0] * x[0] - x[1] * x[1] + 1.5
}

pub fn ex2() -> BenchmarkDef {
    let problem = Problem::new(
        BoundedDomain::cube(2, 0.0, 1.0).unwrap(),
        Box::new(ex2_objective),
        vec![Box::new(ex2_constraint1), Box::new(ex2_constraint2)],
    );
    BenchmarkDef {
        name: "ex2",
        problem,
        reference: ReferenceOptimum {
            // frozen output of ex2_grid_oracle(2000)
            value: EX2_REFERENCE_VALUE,
            provenance: Provenance::GridOracle,
            point: EX2_REFERENCE_POINT.to_vec(),
        },
        budgets: |algorithm| match algorithm {
            Algorithm::Emi2 => 80,
            _ => 60,
        },
        presets: |algorithm| match algorithm {
            Algorithm::Emi1 => (
                spec_with(AcquisitionKind::Emi1, vec![2.0, 0.02], 1),
                AlphaUpdate::Constant,
            ),
            Algorithm::Emi2 => (
                spec_with(AcquisitionKind::Emi2, vec![25.0, 25.0], 1),
                AlphaUpdate::Constant,
            ),
            Algorithm::Ucbo => (
                spec_with(AcquisitionKind::Ueci, vec![100.0, 0.1], 1),
                AlphaUpdate::Constant,
            ),
            Algorithm::Eci => (
                spec_with(AcquisitionKind::Eci, vec![0.0, 0.0], 1),
                AlphaUpdate::Constant,
            ),
        },
    }
}

const EX2_REFERENCE_VALUE: f64 = 0.599_799_899_949_974_96;
const EX2_REFERENCE_POINT: [f64; 2] = [0.195_097_548_774_387_20, 0.404_702_351_175_587_78];

/// Dense-grid minimum of ex2 over `resolution^2` points including the
/// domain corners.
pub fn ex2_grid_oracle(resolution: usize) -> OracleResult {
    assert!(resolution >= 2);
    let coord = |i: usize| i as f64 / (resolution - 1) as f64;
    let mut best = f64::INFINITY;
    let mut best_point = vec![f64::NAN; 2];
    let mut feasible = 0usize;
    for i in 0..resolution {
        for j in 0..resolution {
            let x = [coord(i), coord(j)];
            if ex2_constraint1(&x) >= 0.0 && ex2_constraint2(&x) >= 0.0 {
                feasible += 1;
                let f = ex2_objective(&x);
                if f < best {
                    best = f;
                    best_point = x.to_vec();
                }
            }
        }
    }
    OracleResult {
        value: best,
        point: best_point,
        feasible_fraction: feasible as f64 / (resolution * resolution) as f64,
    }
}

// ---------------------------------------------------------------------
// ex4d: minimize sum(x) on [0,1]^4 s.t. a scaled Hartmann sum >= 1.1;
// rows of A and P index the dimension, columns index the four terms.
// ---------------------------------------------------------------------

const E4: [f64; 4] = [1.0, 1.2, 3.0, 3.2];
const A4: [[f64; 4]; 4] = [
    [10.0, 0.05, 3.0, 17.0],
    [3.0, 10.0, 3.5, 8.0],
    [17.0, 17.0, 1.7, 0.05],
    [3.5, 0.1, 10.0, 10.0],
];
const P4: [[f64; 4]; 4] = [
    [0.131, 0.232, 0.234, 0.404],
    [0.169, 0.413, 0.145, 0.882],
    [0.556, 0.83, 0.352, 0.873],
    [0.012, 0.373, 0.288, 0.574],
];

fn ex4d_objective(x: &[f64]) -> f64 {
    x.iter().sum()
}

fn ex4d_constraint(x: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..4 {
        let mut exponent = 0.0;
        for j in 0..4 {
            let d = x[j] - P4[j][i];
            exponent += A4[j][i] * d * d;
        }
        sum += E4[i] * (-exponent).exp();
    }
    (sum - 1.1) / 0.8387
}

pub fn ex4d() -> BenchmarkDef {
    let problem = Problem::new(
        BoundedDomain::cube(4, 0.0, 1.0).unwrap(),
        Box::new(ex4d_objective),
        vec![Box::new(ex4d_constraint)],
    );
    BenchmarkDef {
        name: "ex4d",
        problem,
        reference: ReferenceOptimum {
            // frozen output of ex4d_sampling_oracle(10_000_000, 0)
            value: EX4D_REFERENCE_VALUE,
            provenance: Provenance::SamplingOracle,
            point: EX4D_REFERENCE_POINT.to_vec(),
        },
        budgets: |_| 50,
        presets: |algorithm| match algorithm {
            Algorithm::Emi1 => (
                spec_with(AcquisitionKind::Emi1, vec![0.0], 1),
                AlphaUpdate::Piecewise(vec![
                    AlphaPhase {
                        start_iteration: 0,
                        alpha: vec![0.0],
                    },
                    AlphaPhase {
                        start_iteration: 10,
                        alpha: vec![0.01],
                    },
                ]),
            ),
            Algorithm::Emi2 => (
                spec_with(AcquisitionKind::Emi2, vec![0.01], 1),
                AlphaUpdate::Constant,
            ),
            Algorithm::Ucbo => (
                spec_with(AcquisitionKind::Ueci, vec![0.01], 2),
                AlphaUpdate::Constant,
            ),
            Algorithm::Eci => (
                spec_with(AcquisitionKind::Eci, vec![0.0], 1),
                AlphaUpdate::Constant,
            ),
        },
    }
}

const EX4D_REFERENCE_VALUE: f64 = 0.051_676_207_505_798_204;
const EX4D_REFERENCE_POINT: [f64; 4] = [0.0, 0.0, 0.0, 0.051_676_207_505_798_204];

/// Minimum of ex4d over uniform feasible samples, refined by a
/// feasibility-preserving coordinate pattern search from the 100 best.
pub fn ex4d_sampling_oracle(samples: usize, seed: u64) -> OracleResult {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut feasible = 0usize;
    // bounded best-list, ordered ascending by objective
    let keep = 100;
    let mut best: Vec<(f64, [f64; 4])> = Vec::with_capacity(keep + 1);
    for _ in 0..samples {
        let x = [
            rng.random::<f64>(),
            rng.random::<f64>(),
            rng.random::<f64>(),
            rng.random::<f64>(),
        ];
        if ex4d_constraint(&x) < 0.0 {
            continue;
        }
        feasible += 1;
        let f = ex4d_objective(&x);
        if best.len() == keep && f >= best[keep - 1].0 {
            continue;
        }
        let pos = best.partition_point(|(v, _)| *v < f);
        best.insert(pos, (f, x));
        best.truncate(keep);
    }

    let mut overall = (f64::INFINITY, vec![f64::NAN; 4]);
    for (_, start) in &best {
        let (f, x) = ex4d_refine(start);
        if f < overall.0 {
            overall = (f, x);
        }
    }
    OracleResult {
        value: overall.0,
        point: overall.1,
        feasible_fraction: feasible as f64 / samples as f64,
    }
}

fn ex4d_refine(start: &[f64; 4]) -> (f64, Vec<f64>) {
    let mut x = start.to_vec();
    let mut fx = ex4d_objective(&x);
    let mut step = 0.05f64;
    while step > 1e-12 {
        let mut improved = false;
        for d in 0..4 {
            for dir in [-1.0, 1.0] {
                let mut candidate = x.clone();
                candidate[d] = (candidate[d] + dir * step).clamp(0.0, 1.0);
                let f = ex4d_objective(&candidate);
                if f < fx && ex4d_constraint(&candidate) >= 0.0 {
                    x = candidate;
                    fx = f;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (fx, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ex1_known_points() {
        let b = ex1();
        let s = b.problem.evaluate(&[0.0, 0.0]).unwrap();
        assert_eq!(s.f_value, 0.0);
        assert_eq!(s.c_values[0], -0.95);
        assert!(!s.feasible);
    }

    #[test]
    fn ex1_oracle_rederives_reported_optimum() {
        let oracle = ex1_sampling_oracle(1_000_000, 0);
        assert!(
            (oracle.value - 0.25).abs() < 0.02,
            "oracle found {}",
            oracle.value
        );
        // small feasible region
        assert!(oracle.feasible_fraction < 0.05);
        assert!(oracle.feasible_fraction > 0.0);
    }

    #[test]
    fn ex1_local_minimum_exists_near_5_4() {
        // the second feasible blob sits near (pi/2, 3pi/2); its best value
        // is the reported local minimum
        let mut best = f64::INFINITY;
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for _ in 0..200_000 {
            let x = [rng.random_range(1.2..1.9), rng.random_range(4.3..5.1)];
            if ex1_constraint(&x) >= 0.0 {
                best = best.min(ex1_objective(&x));
            }
        }
        assert!((best - 5.4).abs() < 0.1, "local minimum candidate {best}");
    }

    #[test]
    fn ex1_reference_point_is_feasible_and_near_reported_value() {
        let b = ex1();
        let s = b.problem.evaluate(&b.reference.point).unwrap();
        assert!(s.feasible);
        assert!((s.f_value - b.reference.value).abs() < 0.005);
    }

    #[test]
    fn ex2_known_points() {
        let b = ex2();
        let s = b.problem.evaluate(&[0.0, 0.0]).unwrap();
        assert_eq!(s.f_value, 0.0);
        assert!((s.c_values[0] + 1.5).abs() < 1e-12);
        assert!((s.c_values[1] - 1.5).abs() < 1e-12);
        assert!(!s.feasible);

        let s = b.problem.evaluate(&[1.0, 1.0]).unwrap();
        assert!((s.c_values[1] + 0.5).abs() < 1e-12);
        assert!(!s.feasible);
    }

    #[test]
    fn ex2_reference_matches_grid_oracle() {
        let oracle = ex2_grid_oracle(2000);
        let b = ex2();
        assert!((oracle.value - b.reference.value).abs() < 1e-12);
        assert_eq!(oracle.point, b.reference.point);
        let s = b.problem.evaluate(&b.reference.point).unwrap();
        assert!(s.feasible);
        assert!((s.f_value - b.reference.value).abs() < 1e-12);
    }

    #[test]
    fn ex4d_matrices_match_independent_transcription() {
        // term-major copy, typed independently from the row-major one
        let a_terms: [[f64; 4]; 4] = [
            [10.0, 3.0, 17.0, 3.5],
            [0.05, 10.0, 17.0, 0.1],
            [3.0, 3.5, 1.7, 10.0],
            [17.0, 8.0, 0.05, 10.0],
        ];
        let p_terms: [[f64; 4]; 4] = [
            [0.131, 0.169, 0.556, 0.012],
            [0.232, 0.413, 0.83, 0.373],
            [0.234, 0.145, 0.352, 0.288],
            [0.404, 0.882, 0.873, 0.574],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(A4[j][i], a_terms[i][j], "A mismatch at term {i}, dim {j}");
                assert_eq!(P4[j][i], p_terms[i][j], "P mismatch at term {i}, dim {j}");
            }
        }
        assert_eq!(E4, [1.0, 1.2, 3.0, 3.2]);
    }

    #[test]
    fn ex4d_constraint_positive_at_p_column_means() {
        let x: Vec<f64> = (0..4)
            .map(|j| (0..4).map(|i| P4[j][i]).sum::<f64>() / 4.0)
            .collect();
        assert!(ex4d_constraint(&x) > 0.0);
    }

    #[test]
    fn ex4d_origin_is_infeasible_by_direct_evaluation() {
        let c = ex4d_constraint(&[0.0, 0.0, 0.0, 0.0]);
        assert!(c < 0.0, "constraint at origin: {c}");
        assert_eq!(ex4d_objective(&[0.0, 0.0, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn ex4d_reference_matches_sampling_oracle() {
        let oracle = ex4d_sampling_oracle(1_000_000, 0);
        let b = ex4d();
        // a tenth of the full oracle budget already lands close
        assert!(
            (oracle.value - b.reference.value).abs() < 1e-3,
            "oracle {} vs frozen {}",
            oracle.value,
            b.reference.value
        );
        let s = b.problem.evaluate(&b.reference.point).unwrap();
        assert!(s.feasible);
        assert!((s.f_value - b.reference.value).abs() < 1e-9);
    }

    #[test]
    fn presets_validate_against_their_problems() {
        for name in names() {
            let b = by_name(name).unwrap();
            for algorithm in Algorithm::ALL {
                let config = b.default_config(algorithm);
                config
                    .validate(b.problem.constraint_count())
                    .unwrap_or_else(|e| panic!("{name}/{algorithm}: {e}"));
            }
        }
        assert!(by_name("nope").is_err());
    }
}
