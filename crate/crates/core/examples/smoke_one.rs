use meritbo::benchmarks::{self, Algorithm};
use meritbo::optimizer;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let algo = Algorithm::from_name(&args[1]).unwrap();
    let b = benchmarks::by_name(args.get(2).map(String::as_str).unwrap_or("ex1")).unwrap();
    let mut config = b.default_config(algo);
    config.seed = 1000;
    let start = Instant::now();
    let trace = optimizer::run(&b.problem, &config).unwrap();
    println!(
        "{}: {:>8.2?} best {:?} first-feasible {:?}",
        algo.name(),
        start.elapsed(),
        trace.final_best_feasible(),
        trace.first_feasible_evaluation()
    );
}
