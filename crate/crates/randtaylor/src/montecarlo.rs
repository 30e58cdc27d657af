//! Simulation-side ground truth: sample τ ~ U(0,1), run the test-problem
//! recursion in log magnitude, and estimate the stability functions
//! empirically to cross-validate the analytic module.
//!
//! Aggregation is chunked at fixed boundaries and folded in chunk order, so
//! statistics are bit-identical regardless of how many threads run.

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{step_coeffs, ComplexValue, Order};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureConfig;
use crate::rng::{CounterRng, RngSeed};
use crate::stability::{as_function, classify, ms_function, Membership, StabilityVerdict};

/// Magnitudes below this are treated as an absorbed (exactly zero)
/// trajectory rather than fed to ln.
const ABSORB_FLOOR: f64 = 1e-300;

const CHUNK: u64 = 1 << 16;

/// Log-magnitude accumulation of one trajectory of the test problem.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryStats {
    pub k_steps: u64,
    /// ln|v_k / η| = Σ ln|f(τ_l)|; -inf when a step was absorbed.
    pub log_mag: f64,
    pub per_step_mean: f64,
    pub per_step_var: f64,
    /// Number of steps whose factor fell below the absorption floor.
    pub absorbed_steps: u64,
}

/// Simulate k steps of the test-problem recursion in log magnitude.
pub fn simulate_log_trajectory(r: Order, z: ComplexValue, k: u64, seed: RngSeed) -> Result<TrajectoryStats> {
    let rng = CounterRng::new(seed);
    simulate_log_trajectory_with(r, z, k, |i| rng.uniform_at(i))
}

/// Same recursion with caller-supplied τ values (index -> τ), used by tests
/// and by the integrator cross-checks.
pub fn simulate_log_trajectory_with(
    r: Order,
    z: ComplexValue,
    k: u64,
    tau_at: impl Fn(u64) -> f64,
) -> Result<TrajectoryStats> {
    if k < 1 {
        return Err(Error::Domain("trajectory needs at least one step".into()));
    }
    let coeffs = step_coeffs(r, z);
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    let mut absorbed = 0u64;
    for i in 0..k {
        let m = coeffs.eval(tau_at(i)).norm();
        if m < ABSORB_FLOOR {
            absorbed += 1;
            continue;
        }
        let l = m.ln();
        sum += l;
        sumsq += l * l;
    }
    let log_mag = if absorbed > 0 { f64::NEG_INFINITY } else { sum };
    let used = (k - absorbed).max(1) as f64;
    let mean = sum / used;
    Ok(TrajectoryStats {
        k_steps: k,
        log_mag,
        per_step_mean: mean,
        per_step_var: (sumsq / used - mean * mean).max(0.0),
        absorbed_steps: absorbed,
    })
}

/// Sample mean with a 99.7% (3σ) CLT half-width.
#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalEstimate {
    pub mean: f64,
    pub ci_halfwidth: f64,
    pub n_used: u64,
    pub n_absorbed: u64,
}

fn chunked_moments(n: u64, stat: impl Fn(u64) -> Option<f64> + Sync) -> (f64, f64, u64) {
    let n_chunks = n.div_ceil(CHUNK);
    let partials: Vec<(f64, f64, u64)> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(n);
            let mut s = 0.0;
            let mut ss = 0.0;
            let mut dropped = 0u64;
            for i in lo..hi {
                match stat(i) {
                    Some(v) => {
                        s += v;
                        ss += v * v;
                    }
                    None => dropped += 1,
                }
            }
            (s, ss, dropped)
        })
        .collect();
    // fold in chunk order for bitwise reproducibility
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    let mut dropped = 0u64;
    for (s, ss, d) in partials {
        sum += s;
        sumsq += ss;
        dropped += d;
    }
    (sum, sumsq, dropped)
}

fn estimate(n: u64, stat: impl Fn(u64) -> Option<f64> + Sync) -> EmpiricalEstimate {
    let (sum, sumsq, dropped) = chunked_moments(n, stat);
    let used = n - dropped;
    let uf = used.max(1) as f64;
    let mean = sum / uf;
    let var = (sumsq / uf - mean * mean).max(0.0);
    EmpiricalEstimate {
        mean,
        ci_halfwidth: 3.0 * (var / uf).sqrt(),
        n_used: used,
        n_absorbed: dropped,
    }
}

/// Monte Carlo estimate of G(z) = E ln|f(τ)|.
pub fn empirical_g(r: Order, z: ComplexValue, n_samples: u64, seed: RngSeed) -> Result<EmpiricalEstimate> {
    if n_samples < 1_000 {
        return Err(Error::Domain("need at least 10^3 samples".into()));
    }
    let coeffs = step_coeffs(r, z);
    let rng = CounterRng::new(seed);
    Ok(estimate(n_samples, move |i| {
        let m = coeffs.eval(rng.uniform_at(i)).norm();
        (m >= ABSORB_FLOOR).then(|| m.ln())
    }))
}

/// Monte Carlo estimate of F(z) = E|f(τ)|².
pub fn empirical_f(r: Order, z: ComplexValue, n_samples: u64, seed: RngSeed) -> Result<EmpiricalEstimate> {
    if n_samples < 1_000 {
        return Err(Error::Domain("need at least 10^3 samples".into()));
    }
    let coeffs = step_coeffs(r, z);
    let rng = CounterRng::new(seed);
    Ok(estimate(n_samples, move |i| Some(coeffs.eval(rng.uniform_at(i)).norm_sqr())))
}

/// Decision from a confidence interval against a threshold: abstain when
/// the interval straddles it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Agreement {
    Agree,
    Disagree,
    Abstain,
}

/// Side-by-side analytic and empirical classification of one point.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub r: u32,
    pub z: [f64; 2],
    pub analytic: AnalyticValues,
    pub empirical: EmpiricalValues,
    pub verdict_agreement: VerdictAgreement,
    pub horizon_per_step_mean: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyticValues {
    pub f: f64,
    pub g: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalValues {
    pub f_mean: f64,
    pub f_ci: f64,
    pub g_mean: f64,
    pub g_ci: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictAgreement {
    pub ms: Agreement,
    pub r#as: Agreement,
}

fn ci_decision(mean: f64, halfwidth: f64, threshold: f64, analytic_in: Membership) -> Agreement {
    if (mean - threshold).abs() <= halfwidth {
        return Agreement::Abstain;
    }
    let empirical_in = mean < threshold;
    match analytic_in {
        Membership::Marginal => Agreement::Abstain,
        Membership::In if empirical_in => Agreement::Agree,
        Membership::Out if !empirical_in => Agreement::Agree,
        _ => Agreement::Disagree,
    }
}

/// Compare the empirical CI decisions with [`classify`].
pub fn empirical_classification(
    r: Order,
    z: ComplexValue,
    n_samples: u64,
    k_horizon: u64,
    seed: RngSeed,
    cfg: &QuadratureConfig,
) -> Result<ComparisonReport> {
    let verdict: StabilityVerdict = classify(r, z, 1e-9, cfg)?;
    let g_est = empirical_g(r, z, n_samples, seed.stream(1))?;
    let f_est = empirical_f(r, z, n_samples, seed.stream(2))?;
    let horizon = simulate_log_trajectory(r, z, k_horizon.max(1), seed.stream(3))?;
    Ok(ComparisonReport {
        r: r.r(),
        z: [z.re, z.im],
        analytic: AnalyticValues { f: verdict.f_value, g: verdict.g_value },
        empirical: EmpiricalValues {
            f_mean: f_est.mean,
            f_ci: f_est.ci_halfwidth,
            g_mean: g_est.mean,
            g_ci: g_est.ci_halfwidth,
        },
        verdict_agreement: VerdictAgreement {
            ms: ci_decision(f_est.mean, f_est.ci_halfwidth, 1.0, verdict.in_ms),
            r#as: ci_decision(g_est.mean, g_est.ci_halfwidth, 0.0, verdict.in_as),
        },
        horizon_per_step_mean: horizon.per_step_mean,
    })
}

/// Convenience: analytic G for callers that tolerate the non-convergent
/// best estimate.
pub fn analytic_g_lenient(r: Order, z: ComplexValue, cfg: &QuadratureConfig) -> f64 {
    match as_function(r, z, cfg) {
        Ok(g) => g,
        Err(Error::NonConvergent { estimate, .. }) => estimate,
        Err(_) => f64::NAN,
    }
}

/// Convenience: analytic F (always converges, closed form).
pub fn analytic_f(r: Order, z: ComplexValue) -> f64 {
    ms_function(r, z)
}
