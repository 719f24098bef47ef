use meritbo::benchmarks::{self, Algorithm};
use meritbo::optimizer;
use std::time::Instant;

fn main() {
    let b = benchmarks::by_name("ex1").unwrap();
    for budget in [5usize, 8, 10, 12, 15] {
        let mut config = b.default_config(Algorithm::Emi2);
        config.seed = 1000;
        config.budget = budget;
        let start = Instant::now();
        let trace = optimizer::run(&b.problem, &config).unwrap();
        println!(
            "budget {budget}: {:>8.2?} last-x {:?}",
            start.elapsed(),
            trace.records.last().map(|r| r.x.clone())
        );
    }
}
