use meritbo::benchmarks;
use meritbo::gp::{HyperSearchConfig, ScaledSurrogate};
use meritbo::optimizer::latin_hypercube;
use std::time::Instant;

fn main() {
    let b = benchmarks::by_name("ex1").unwrap();
    for t in [10usize, 30, 60] {
        let pts = latin_hypercube(b.problem.domain(), t, 7);
        let samples: Vec<_> = pts.iter().map(|p| b.problem.evaluate(p).unwrap()).collect();
        let xs: Vec<Vec<f64>> = samples.iter().map(|s| s.x.clone()).collect();
        let ys: Vec<f64> = samples.iter().map(|s| s.f_value).collect();
        let search = HyperSearchConfig { seed: 3, ..Default::default() };

        let start = Instant::now();
        let surr = ScaledSurrogate::fit(b.problem.domain(), &xs, &ys, &search).unwrap();
        let fit_time = start.elapsed();

        let cands = latin_hypercube(b.problem.domain(), 8192, 9);
        let start = Instant::now();
        let preds = surr.predict_batch(&cands);
        let predict_time = start.elapsed();
        println!(
            "T={t:3}  hyper+fit: {:>9.1?}  predict 8192: {:>9.1?}  (sum mu {:.3})",
            fit_time, predict_time,
            preds.iter().map(|p| p.0).sum::<f64>() / 8192.0
        );
    }
}
