//! Estimate the boundedness radius γ_r — the radius beyond which no point
//! is stable in any of the three senses — for each scheme order.
//!
//! Run with: cargo run --release --example gamma_bound

use randtaylor::regions::estimate_gamma;
use randtaylor::{Order, QuadratureConfig};

fn main() {
    let cfg = QuadratureConfig::default();
    for r in 0..=4u32 {
        let est = estimate_gamma(Order::new(r).unwrap(), 720, &cfg).unwrap();
        println!("γ_{r} ≈ {:.4}  ({} angular samples)", est.gamma, est.angular_samples);
    }
}
