use meritbo::benchmarks::{self, Algorithm};
use meritbo::optimizer;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let algo = Algorithm::from_name(&args[1]).unwrap();
    let bench = args.get(2).map(String::as_str).unwrap_or("ex1");
    let seed: u64 = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(1000);
    let b = benchmarks::by_name(bench).unwrap();
    let mut config = b.default_config(algo);
    config.seed = seed;
    let trace = optimizer::run(&b.problem, &config).unwrap();
    for r in &trace.records {
        println!(
            "{:3} {} x=({}) f={:8.4} c=({}) {} best={:?}",
            r.eval_index,
            if r.initial { "I" } else { " " },
            r.x.iter().map(|v| format!("{v:7.4}")).collect::<Vec<_>>().join(","),
            r.f_value,
            r.c_values.iter().map(|v| format!("{v:7.3}")).collect::<Vec<_>>().join(","),
            if r.feasible { "F" } else { "." },
            r.best_feasible_f.map(|v| (v * 1e4).round() / 1e4),
        );
    }
}
