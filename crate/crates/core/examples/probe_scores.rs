use meritbo::acquisition::{emi_form1, MeritIncumbent, PosteriorBundle};
use meritbo::benchmarks::{self, Algorithm};
use meritbo::gp::{HyperSearchConfig, ScaledSurrogate};
use meritbo::optimizer;
use meritbo::problem::{Dataset, Sample};

fn main() {
    let b = benchmarks::by_name("ex1").unwrap();
    let mut config = b.default_config(Algorithm::Emi1);
    config.seed = 1001;
    let trace = optimizer::run(&b.problem, &config).unwrap();

    for upto in [20usize, 35, 55] {
        let mut ds = Dataset::new(2, 1);
        for r in &trace.records[..upto] {
            ds.push(Sample::new(r.x.clone(), r.f_value, r.c_values.clone())).unwrap();
        }
        let xs: Vec<Vec<f64>> = ds.samples().iter().map(|s| s.x.clone()).collect();
        let fs: Vec<f64> = ds.samples().iter().map(|s| s.f_value).collect();
        let cs: Vec<f64> = ds.samples().iter().map(|s| s.c_values[0]).collect();
        let search = HyperSearchConfig { seed: 1, ..config.hyper.clone() };
        let fgp = ScaledSurrogate::fit(b.problem.domain(), &xs, &fs, &search).unwrap();
        let cgp = ScaledSurrogate::fit(b.problem.domain(), &xs, &cs, &search).unwrap();
        let alpha = [20.0];
        let inc = MeritIncumbent::from_dataset(&ds, &alpha).unwrap();
        println!("== T={upto} incumbent f={:.3} viol={:?} ls_f={:?} sv_f={:.2} ls_c={:?} sv_c={:.2}",
            inc.f_value, inc.violations,
            fgp.model().kernel().length_scales.iter().map(|l| (l*100.0).round()/100.0).collect::<Vec<_>>(),
            fgp.model().kernel().signal_variance,
            cgp.model().kernel().length_scales.iter().map(|l| (l*100.0).round()/100.0).collect::<Vec<_>>(),
            cgp.model().kernel().signal_variance);
        for (label, x) in [
            ("blob2 center (4.71,1.25)", vec![4.712, 1.253]),
            ("blob1 fringe (1.50,4.45)", vec![1.50, 4.45]),
            ("far corner   (5.9,5.9)  ", vec![5.9, 5.9]),
            ("mid          (2.0,2.6)  ", vec![2.0, 2.6]),
        ] {
            let (mf, sf) = fgp.predict(&x);
            let (mc, sc) = cgp.predict(&x);
            let bundle = PosteriorBundle { objective: (mf, sf), constraints: vec![(mc, sc)] };
            let score = emi_form1(&bundle, &inc, &alpha, 0.0);
            println!("  {label}: mu_f={mf:7.3} s_f={sf:6.3} mu_c={mc:7.3} s_c={sc:6.3} score={score:8.3}");
        }
    }
}
