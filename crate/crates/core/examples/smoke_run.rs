use meritbo::benchmarks::{self, Algorithm};
use meritbo::optimizer;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let bench = args.get(1).map(String::as_str).unwrap_or("ex1");
    let n_runs: usize = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(3);
    let b = benchmarks::by_name(bench).unwrap();
    println!("reference optimum: {}", b.reference.value);
    for algorithm in Algorithm::ALL {
        let start = Instant::now();
        let mut finals = Vec::new();
        let mut hits = Vec::new();
        for seed in 0..n_runs as u64 {
            let mut config = b.default_config(algorithm);
            config.seed = 1000 + seed;
            let trace = optimizer::run(&b.problem, &config).unwrap();
            finals.push(trace.final_best_feasible());
            hits.push(trace.first_feasible_evaluation());
        }
        println!(
            "{:5} {:6.1}s  finals: {:?}  first-feasible: {:?}",
            algorithm.name(),
            start.elapsed().as_secs_f64(),
            finals
                .iter()
                .map(|f| f.map(|v| (v * 1000.0).round() / 1000.0))
                .collect::<Vec<_>>(),
            hits
        );
    }
}
