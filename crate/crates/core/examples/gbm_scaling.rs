//! Local-maxima scaling of GBM replicas.
//!
//! cargo run --release --example gbm_scaling -- [mu] [sigma] [replicas] [max_n] [seed]

use std::time::Instant;

use profit_landscape::{
    fit_exponent, measure_scaling_universe, simulate_replicas, AlignmentPolicy, GbmParams, ScalingPlan, StrategyParams,
    Universe,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: f64| args.get(i).and_then(|a| a.parse().ok()).unwrap_or(default);
    let params = GbmParams {
        mu: arg(0, 0.0003),
        sigma: arg(1, 0.02),
        x0: 100.0,
        len: 5301,
    };
    let replicas = arg(2, 10.0) as usize;
    let max_n = arg(3, 256.0) as usize;

    let set = simulate_replicas(&params, arg(4, 1.0) as u64, replicas)?;
    let universe = Universe::new(set.series, AlignmentPolicy::RequireEqualLength)?;
    let resolutions = [16, 32, 64, 128, 256, 512, 1024]
        .into_iter()
        .filter(|&n| n <= max_n)
        .collect();
    let plan = ScalingPlan::new(resolutions);

    let start = Instant::now();
    let scaling = measure_scaling_universe(&universe, &StrategyParams::default(), &plan)?;
    for (n, m) in scaling.resolutions.iter().zip(&scaling.counts) {
        println!("N = {n:5}  M = {m:10.1}");
    }
    let fit = fit_exponent(&scaling)?;
    println!(
        "exponent = {:.4}, r² = {:.4}, points = {} ({:.1?})",
        fit.exponent,
        fit.r_squared,
        fit.points_used,
        start.elapsed()
    );
    Ok(())
}
