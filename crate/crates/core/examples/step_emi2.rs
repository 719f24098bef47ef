use meritbo::benchmarks::{self, Algorithm};
use meritbo::optimizer::{self, select_next};
use meritbo::problem::{Dataset, Sample};
use std::time::Instant;

fn main() {
    let b = benchmarks::by_name("ex1").unwrap();
    let config = {
        let mut c = b.default_config(Algorithm::Emi2);
        c.seed = 1000;
        c
    };
    let mut dataset = Dataset::new(2, 1);
    for x in optimizer::latin_hypercube(b.problem.domain(), 4, 12345) {
        let s = b.problem.evaluate(&x).unwrap();
        dataset.push(s).unwrap();
    }
    let alpha = config.acquisition.alpha.clone();
    for k in 0..30 {
        let start = Instant::now();
        let x = select_next(b.problem.domain(), &dataset, &config, &alpha, None, k).unwrap();
        let s = b.problem.evaluate(&x).unwrap();
        println!(
            "k={k:2} {:>8.2?} x=({:.6}, {:.6}) f={:.4} c={:.4} feas={}",
            start.elapsed(), x[0], x[1], s.f_value, s.c_values[0], s.feasible
        );
        dataset.push(s).unwrap();
    }
}
