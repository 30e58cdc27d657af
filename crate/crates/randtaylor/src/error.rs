//! Error types shared across the crate.

use thiserror::Error;

use crate::complex::MAX_ORDER;

#[derive(Debug, Error)]
pub enum Error {
    #[error("order {0} exceeds the supported cap {MAX_ORDER}")]
    OrderTooLarge(u32),

    #[error("argument outside domain: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of subdivision depth. Carries the best
    /// estimate so callers can degrade to a "marginal" classification
    /// instead of aborting a whole scan.
    #[error("quadrature did not converge: best estimate {estimate} (error bound {error_bound:e})")]
    NonConvergent { estimate: f64, error_bound: f64 },

    #[error("grid of {0} nodes exceeds the configured cap")]
    GridTooLarge(usize),

    #[error("radius search exceeded 2^16 without finding an all-unstable circle")]
    SearchOverflow,

    #[error("derivative oracle inconsistent at t = {t}: {detail}")]
    Oracle { t: f64, detail: String },

    #[error("solution diverged at step {0}")]
    Diverged(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
