use fbm_lab::harness::{run_replications, ExperimentSpec};
use fbm_lab::stats::{rate_regression, Moments};
use fbm_lab::{sigma_h, HurstIndex};

// The normalised quadratic variation at H = 1/4 fluctuates like
// sigma * n^{-1/2}, so its variance falls like 1/n and its std like n^{-1/2}.
#[test]
fn quadratic_variation_spread_shrinks_at_quarter() {
    let sizes: Vec<usize> = (8..=12).map(|e| 1usize << e).collect();
    let spec = ExperimentSpec::new("qv", HurstIndex::QUARTER, sizes, 600, 2024);
    let samples = run_replications(&spec).unwrap();
    let sigma_sq = sigma_h(HurstIndex::QUARTER, 1e-8).unwrap().value.powi(2);

    let mut var_pairs = Vec::new();
    let mut std_pairs = Vec::new();
    for s in &samples {
        let m = Moments::from_samples(&s.values).unwrap();
        let scaled = m.var * s.n as f64;
        assert!((scaled / sigma_sq - 1.0).abs() < 0.25, "n={}: n*var {scaled} vs {sigma_sq}", s.n);
        var_pairs.push((s.n as f64, m.var));
        std_pairs.push((s.n as f64, m.std()));
    }
    let var_slope = rate_regression(&var_pairs).unwrap().slope;
    let std_slope = rate_regression(&std_pairs).unwrap().slope;
    assert!((var_slope + 1.0).abs() < 0.15, "variance slope {var_slope}");
    assert!((std_slope + 0.5).abs() < 0.08, "std slope {std_slope}");
}
