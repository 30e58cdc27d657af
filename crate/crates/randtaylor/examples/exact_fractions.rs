//! Evaluate the stability functions in exact rational arithmetic: the
//! mean-square function F and the reference magnitude are polynomials in
//! Re(z), Im(z) with rational coefficients, so rational inputs give exact
//! fractions.
//!
//! Run with: cargo run --example exact_fractions

use num_rational::BigRational;
use randtaylor::complex::rational_complex;
use randtaylor::stability::{ms_function_exact, ref_sq_exact};
use randtaylor::Order;

fn main() {
    // z = -0.03 + 1.9i, a point inside R²_MS but outside R³_MS
    let z = rational_complex(-3, 100, 19, 10);
    for r in [2u32, 3] {
        let f = ms_function_exact(Order::new(r).unwrap(), &z);
        println!("F_{r}(-0.03+1.9i) = {f}  ({})", if f < BigRational::from_integer(1.into()) { "stable" } else { "unstable" });
    }

    // z = -0.6 + 2.8i: reference membership flips between orders 2 and 3
    let z = rational_complex(-3, 5, 14, 5);
    for r in [2u32, 3] {
        let m = ref_sq_exact(Order::new(r).unwrap(), &z);
        println!("|ref_{r}(-0.6+2.8i)|² = {m}  ({})", if m < BigRational::from_integer(1.into()) { "stable" } else { "unstable" });
    }
}
