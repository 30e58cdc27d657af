//! Cross-validate the analytic stability functions against Monte Carlo
//! estimates from independently simulated scheme steps.
//!
//! Run with: cargo run --release --example monte_carlo_check

use num_complex::Complex;
use randtaylor::montecarlo::empirical_classification;
use randtaylor::rng::RngSeed;
use randtaylor::{Order, QuadratureConfig};

fn main() {
    let report = empirical_classification(
        Order::new(0).unwrap(),
        Complex::new(-1.0, 0.0),
        1_000_000,
        100_000,
        RngSeed::new(42, 0),
        &QuadratureConfig::default(),
    )
    .unwrap();
    println!(
        "analytic:  F = {:.6}, G = {:.6}",
        report.analytic.f, report.analytic.g
    );
    println!(
        "empirical: F = {:.6} ± {:.6}, G = {:.6} ± {:.6} (3σ)",
        report.empirical.f_mean, report.empirical.f_ci, report.empirical.g_mean, report.empirical.g_ci
    );
    println!("agreement: MS {:?}, AS {:?}", report.verdict_agreement.ms, report.verdict_agreement.r#as);
    println!("long-run per-step log-magnitude drift: {:+.6}", report.horizon_per_step_mean);
}
