use meritbo::benchmarks::{self, Algorithm};
use meritbo::optimizer;
use std::time::Instant;

fn main() {
    let b = benchmarks::by_name("ex1").unwrap();
    let mut config = b.default_config(Algorithm::Emi2);
    config.seed = 1000;
    for budget in [5usize, 10, 20] {
        config.budget = budget;
        let start = Instant::now();
        let trace = optimizer::run(&b.problem, &config).unwrap();
        println!(
            "budget {budget:3}: {:>8.2?}  best {:?}",
            start.elapsed(),
            trace.final_best_feasible()
        );
    }
}
