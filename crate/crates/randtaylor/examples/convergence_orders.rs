//! Measure empirical convergence orders of the randomized and
//! deterministic Taylor schemes on the linear test problem y' = λy.
//!
//! Run with: cargo run --release --example convergence_orders

use std::sync::Arc;

use randtaylor::rng::RngSeed;
use randtaylor::scheme::{convergence_study, IvpSpec, LinearOracle, Mode};
use randtaylor::Order;

fn main() {
    let lambda = -2.0f64;
    let ivp = IvpSpec::new(0.0, 1.0, vec![1.0], Arc::new(move |_t, v: &[f64]| vec![lambda * v[0]])).unwrap();
    let oracle = LinearOracle::scalar(lambda);
    let exact = [lambda.exp()];
    let ns = [8usize, 16, 32, 64, 128, 256, 512];

    let rand = convergence_study(&ivp, &oracle, &exact, Order::new(0).unwrap(), &ns, 1000, RngSeed::new(1, 0), Mode::Randomized).unwrap();
    println!("randomized r=0 over 1000 replications:");
    for row in &rand.rows {
        println!("  n={:4}  L² error {:.3e}  mean error {:.3e}", row.n, row.l2_error, row.mean_error);
    }
    println!("  fitted orders: L² {:.2}, mean {:.2}", rand.l2_slope, rand.mean_slope);

    let det = convergence_study(&ivp, &oracle, &exact, Order::new(1).unwrap(), &ns, 1, RngSeed::new(1, 0), Mode::Deterministic).unwrap();
    println!("deterministic r=1: fitted order {:.2}", det.l2_slope);
}
