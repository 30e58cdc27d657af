//! Classify a single point of the complex plane against all three
//! stability regions.
//!
//! Run with: cargo run --example eval_point

use num_complex::Complex;
use randtaylor::{classify, Order, QuadratureConfig};

fn main() {
    let cfg = QuadratureConfig::default();
    for (r, z) in [
        (0, Complex::new(-1.0, 0.0)),
        (0, Complex::new(-2.1, 0.0)),
        (1, Complex::new(0.01, 1.0)),
        (4, Complex::new(-0.25, 2.75)),
    ] {
        let v = classify(Order::new(r).unwrap(), z, 1e-9, &cfg).unwrap();
        println!(
            "r={r} z={z}: F={:.6} G={:+.6} |ref|²={:.6} → MS {} | AS {} | ref {}",
            v.f_value,
            v.g_value,
            v.ref_sq_value,
            v.in_ms.as_str(),
            v.in_as.as_str(),
            v.in_ref.as_str()
        );
    }
}
