use meritbo::benchmarks;

fn main() {
    let ex2 = benchmarks::ex2_grid_oracle(2000);
    println!("ex2 value {:.17e}", ex2.value);
    println!("ex2 point {:.17e} {:.17e}", ex2.point[0], ex2.point[1]);
    let ex4 = benchmarks::ex4d_sampling_oracle(10_000_000, 0);
    println!("ex4d value {:.17e}", ex4.value);
    println!(
        "ex4d point {:.17e} {:.17e} {:.17e} {:.17e}",
        ex4.point[0], ex4.point[1], ex4.point[2], ex4.point[3]
    );
    println!("ex4d feasible fraction {}", ex4.feasible_fraction);
    // ex1 reference point feasibility check
    let x1 = 3.0 * std::f64::consts::FRAC_PI_2;
    let asin95 = 0.95f64.asin();
    for backoff in [0.0, 1e-10, 1e-9, 1e-8] {
        let x2 = asin95 + backoff;
        let c = -x1.sin() * x2.sin() - 0.95;
        println!("x1={x1:.15} x2={x2:.17} c={c:.3e} f={:.17}", x1.sin() + x2);
    }
}
