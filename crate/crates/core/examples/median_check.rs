use meritbo::benchmarks::{self, Algorithm};
use meritbo::optimizer;
use rayon::prelude::*;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let bench = args.get(1).map(String::as_str).unwrap_or("ex1");
    let n_runs: usize = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(16);
    let algos: Vec<Algorithm> = match args.get(3) {
        Some(list) => list.split(',').map(|a| Algorithm::from_name(a).unwrap()).collect(),
        None => Algorithm::ALL.to_vec(),
    };
    let b = benchmarks::by_name(bench).unwrap();
    println!("reference: {:.4}", b.reference.value);
    for algorithm in algos {
        let start = Instant::now();
        let results: Vec<(Option<f64>, Option<usize>)> = (0..n_runs as u64)
            .into_par_iter()
            .map(|seed| {
                let bb = benchmarks::by_name(bench).unwrap();
                let mut config = bb.default_config(algorithm);
                config.seed = 1000 + seed;
                if let Ok(lo) = std::env::var("LS_LO") {
                    config.hyper.length_scale_bounds.0 = lo.parse().unwrap();
                }
                if let Ok(hi) = std::env::var("LS_HI") {
                    config.hyper.length_scale_bounds.1 = hi.parse().unwrap();
                }
                let trace = optimizer::run(&bb.problem, &config).unwrap();
                (trace.final_best_feasible(), trace.first_feasible_evaluation())
            })
            .collect();
        let mut finals: Vec<f64> = results.iter().filter_map(|r| r.0).collect();
        finals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = if finals.is_empty() { f64::NAN } else { finals[finals.len() / 2] };
        let n_feas = finals.len();
        let hit8 = results.iter().filter(|r| r.1.map_or(false, |h| h <= 8)).count();
        println!(
            "{:5} {:6.1}s  feasible-runs {n_feas}/{n_runs}  median-final {median:.4}  range [{:.4}, {:.4}]  first-feas<=8: {hit8}",
            algorithm.name(),
            start.elapsed().as_secs_f64(),
            finals.first().copied().unwrap_or(f64::NAN),
            finals.last().copied().unwrap_or(f64::NAN),
        );
    }
}
