//! Probabilistic stability regions of randomized Taylor schemes.
//!
//! A randomized Taylor scheme of order `r` advances an ODE solution with a
//! degree-(r+1) local Taylor polynomial plus a correction evaluated at a
//! uniformly sampled intermediate point. On the linear test problem
//! `z' = λz` each step multiplies the state by the random factor
//! `f_{r,z}(τ) = Σ_{j=0}^{r+1} z^j/j! + z^{r+2}/(r+1)! · τ^{r+1}` with
//! `z = λh`, which makes three stability notions computable:
//!
//! * mean-square: `F_r(z) = E|f_{r,z}(τ)|² < 1` — closed form, and exact in
//!   rational arithmetic for rational inputs ([`stability::ms_function`],
//!   [`stability::ms_function_exact`]);
//! * asymptotic (= in-probability): `G_r(z) = E ln|f_{r,z}(τ)| < 0` —
//!   adaptive quadrature with the interior root split off, cross-checked
//!   against a root-decomposition route ([`stability::as_function`]);
//! * deterministic reference: `|Σ_{j=0}^{r+2} z^j/j!| < 1`
//!   ([`stability::ref_sq`]).
//!
//! On top of the pointwise machinery sit region rasters and marching-squares
//! contours ([`regions`]), Monte Carlo cross-validation with a reproducible
//! counter-based RNG ([`montecarlo`], [`rng`]), the integrator itself with
//! pluggable derivative oracles ([`scheme`]), and a verifier that reproduces
//! the published counterexample fractions bitwise ([`remarks`]).
//!
//! ```
//! use randtaylor::{classify, Membership, Order, QuadratureConfig};
//!
//! let verdict = classify(
//!     Order::new(0).unwrap(),
//!     num_complex::Complex::new(-1.0, 0.0),
//!     1e-9,
//!     &QuadratureConfig::default(),
//! ).unwrap();
//! assert_eq!(verdict.in_ms, Membership::In);
//! assert!((verdict.g_value + 1.0).abs() < 1e-6);
//! ```

pub mod cli;
pub mod complex;
pub mod error;
pub mod montecarlo;
pub mod quadrature;
pub mod regions;
pub mod remarks;
pub mod rng;
pub mod scheme;
pub mod stability;

pub use complex::{ComplexValue, Order, RationalComplex, MAX_ORDER};
pub use error::{Error, Result};
pub use quadrature::QuadratureConfig;
pub use stability::{as_function, classify, ms_function, ref_sq, Membership, StabilityVerdict};
