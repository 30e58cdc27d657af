//! For points in the left half-plane, find the smallest scheme order whose
//! mean-square region contains them — the union over r covers all of ℂ₋.
//!
//! Run with: cargo run --example min_order

use num_complex::Complex;
use randtaylor::regions::min_order_for_ms;
use randtaylor::Order;

fn main() {
    let cap = Order::new(24).unwrap();
    for z in [
        Complex::new(-0.5, 0.0),
        Complex::new(-2.1, 0.0),
        Complex::new(-1.0, 1.6),
        Complex::new(-4.5, 3.0),
        Complex::new(-0.1, 4.9),
    ] {
        match min_order_for_ms(z, cap) {
            Some(r) => println!("z = {z}: mean-square stable from order r = {}", r.r()),
            None => println!("z = {z}: no order ≤ {} suffices", cap.r()),
        }
    }
}
