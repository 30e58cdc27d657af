//! The randomized Taylor integrator for general IVPs via a derivative
//! oracle, its deterministic counterpart, and an empirical convergence
//! harness.
//!
//! Each step builds the local Taylor polynomial p of degree r+1 from
//! oracle-supplied derivatives, then applies the randomized correction
//! h * (f(θ, p(θ)) - p'(θ)) at a uniformly sampled intermediate point θ.
//! Dropping the correction yields the classical deterministic Taylor
//! scheme of order r+1.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{factorial_f64, Order};
use crate::error::{Error, Result};
use crate::rng::{CounterRng, RngSeed};

/// Right-hand side f(t, y) of the IVP.
pub type Rhs = Arc<dyn Fn(f64, &[f64]) -> Vec<f64> + Send + Sync>;

/// Initial value problem y' = f(t, y), y(a) = eta on [a, b].
#[derive(Clone)]
pub struct IvpSpec {
    pub a: f64,
    pub b: f64,
    pub eta: Vec<f64>,
    pub rhs: Rhs,
}

impl IvpSpec {
    pub fn new(a: f64, b: f64, eta: Vec<f64>, rhs: Rhs) -> Result<Self> {
        // also rejects NaN endpoints
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(a < b) {
            return Err(Error::Domain(format!("need a < b, got [{a}, {b}]")));
        }
        if eta.is_empty() {
            return Err(Error::Domain("state dimension must be positive".into()));
        }
        Ok(IvpSpec { a, b, eta, rhs })
    }

    pub fn dimension(&self) -> usize {
        self.eta.len()
    }
}

/// Supplier of local-solution derivatives u^(j)(t) for j = 0..=degree at
/// the current state. Row 0 must equal the state itself and row 1 must
/// equal the right-hand side there (checked per step in debug builds).
pub trait DerivativeOracle: Send + Sync {
    fn derivatives(&self, t: f64, v: &[f64], degree: usize) -> Vec<Vec<f64>>;
}

/// Oracle for linear systems y' = A y: u^(j) = A^j v.
pub struct LinearOracle {
    matrix: Vec<Vec<f64>>,
}

impl LinearOracle {
    pub fn new(matrix: Vec<Vec<f64>>) -> Self {
        LinearOracle { matrix }
    }

    /// Scalar y' = λ y.
    pub fn scalar(lambda: f64) -> Self {
        LinearOracle { matrix: vec![vec![lambda]] }
    }

    /// Complex λ as the 2x2 real rotation-scaling system.
    pub fn complex_scalar(re: f64, im: f64) -> Self {
        LinearOracle { matrix: vec![vec![re, -im], vec![im, re]] }
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }
}

impl DerivativeOracle for LinearOracle {
    fn derivatives(&self, _t: f64, v: &[f64], degree: usize) -> Vec<Vec<f64>> {
        let mut rows = Vec::with_capacity(degree + 1);
        rows.push(v.to_vec());
        for j in 1..=degree {
            let prev = &rows[j - 1];
            rows.push(self.apply(prev));
        }
        rows
    }
}

/// Oracle for the scalar demo problem y' = y²: u^(j) = j! * u^(j+1 power).
pub struct SquareRhsOracle;

impl DerivativeOracle for SquareRhsOracle {
    fn derivatives(&self, _t: f64, v: &[f64], degree: usize) -> Vec<Vec<f64>> {
        let u = v[0];
        (0..=degree)
            .map(|j| vec![factorial_f64(j as u32) * u.powi(j as i32 + 1)])
            .collect()
    }
}

/// Randomized or deterministic stepping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Randomized,
    Deterministic,
}

/// Integration parameters: order, mesh size, seed, and mode.
#[derive(Debug, Clone, Copy)]
pub struct SchemeConfig {
    pub r: Order,
    pub n: usize,
    pub seed: RngSeed,
    pub mode: Mode,
}

impl SchemeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Domain("need at least n = 2 steps".into()));
        }
        Ok(())
    }
}

/// Mesh nodes with states, plus the sampled τ values (empty in
/// deterministic mode).
#[derive(Debug, Clone, Serialize)]
pub struct SolutionPath {
    pub nodes: Vec<(f64, Vec<f64>)>,
    pub taus: Vec<f64>,
}

impl SolutionPath {
    pub fn endpoint(&self) -> &[f64] {
        &self.nodes.last().expect("path is never empty").1
    }
}

#[cfg(debug_assertions)]
fn check_oracle(
    t: f64,
    v: &[f64],
    rows: &[Vec<f64>],
    rhs: &dyn Fn(f64, &[f64]) -> Vec<f64>,
) -> Result<()> {
    let close = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= 1e-9 * (1.0 + x.abs().max(y.abs())))
    };
    if !close(&rows[0], v) {
        return Err(Error::Oracle { t, detail: "degree-0 derivative differs from the state".into() });
    }
    if rows.len() > 1 {
        let f = rhs(t, v);
        if !close(&rows[1], &f) {
            return Err(Error::Oracle { t, detail: "degree-1 derivative differs from the rhs".into() });
        }
    }
    Ok(())
}

/// One step of the scheme from (t_prev, v_prev) with step size h.
///
/// `tau = Some(τ)` applies the randomized correction at θ = t_prev + τh;
/// `None` is the deterministic Taylor step.
pub fn step(
    r: Order,
    h: f64,
    t_prev: f64,
    v_prev: &[f64],
    oracle: &dyn DerivativeOracle,
    rhs: &dyn Fn(f64, &[f64]) -> Vec<f64>,
    tau: Option<f64>,
) -> Result<Vec<f64>> {
    if let Some(t) = tau {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("tau = {t} outside [0, 1]")));
        }
    }
    let degree = r.r() as usize + 1;
    let rows = oracle.derivatives(t_prev, v_prev, degree);
    #[cfg(debug_assertions)]
    check_oracle(t_prev, v_prev, &rows, rhs)?;

    let dim = v_prev.len();
    // Taylor coefficients c_j = u^(j) / j!
    let coeffs: Vec<Vec<f64>> = rows
        .iter()
        .enumerate()
        .map(|(j, row)| {
            let inv = 1.0 / factorial_f64(j as u32);
            row.iter().map(|x| x * inv).collect()
        })
        .collect();

    let poly = |s: f64| -> Vec<f64> {
        let mut out = vec![0.0; dim];
        let mut sp = 1.0;
        for c in &coeffs {
            for (o, x) in out.iter_mut().zip(c) {
                *o += x * sp;
            }
            sp *= s;
        }
        out
    };
    let poly_deriv = |s: f64| -> Vec<f64> {
        let mut out = vec![0.0; dim];
        let mut sp = 1.0;
        for (j, c) in coeffs.iter().enumerate().skip(1) {
            for (o, x) in out.iter_mut().zip(c) {
                *o += j as f64 * x * sp;
            }
            if j >= 1 {
                sp *= s;
            }
        }
        out
    };

    let mut v_next = poly(h);
    if let Some(t) = tau {
        let s = t * h;
        let theta = t_prev + s;
        let p_theta = poly(s);
        let f_theta = rhs(theta, &p_theta);
        let dp_theta = poly_deriv(s);
        for ((v, f), dp) in v_next.iter_mut().zip(&f_theta).zip(&dp_theta) {
            *v += h * (f - dp);
        }
    }
    Ok(v_next)
}

/// Integrate the IVP over a uniform mesh, drawing τ per step from the
/// seeded stream in randomized mode.
pub fn integrate(ivp: &IvpSpec, cfg: &SchemeConfig, oracle: &dyn DerivativeOracle) -> Result<SolutionPath> {
    let rng = CounterRng::new(cfg.seed);
    integrate_with(ivp, cfg, oracle, |k| rng.uniform_at(k as u64))
}

/// Integrate with caller-supplied τ values (step index -> τ).
pub fn integrate_with(
    ivp: &IvpSpec,
    cfg: &SchemeConfig,
    oracle: &dyn DerivativeOracle,
    tau_at: impl Fn(usize) -> f64,
) -> Result<SolutionPath> {
    cfg.validate()?;
    let h = (ivp.b - ivp.a) / cfg.n as f64;
    let mut nodes = Vec::with_capacity(cfg.n + 1);
    let mut taus = Vec::new();
    nodes.push((ivp.a, ivp.eta.clone()));
    let mut v = ivp.eta.clone();
    let rhs = ivp.rhs.clone();
    for k in 1..=cfg.n {
        let t_prev = ivp.a + (k - 1) as f64 * h;
        let tau = match cfg.mode {
            Mode::Randomized => {
                let t = tau_at(k - 1);
                taus.push(t);
                Some(t)
            }
            Mode::Deterministic => None,
        };
        v = step(cfg.r, h, t_prev, &v, oracle, &*rhs, tau)?;
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Diverged(k));
        }
        nodes.push((ivp.a + k as f64 * h, v.clone()));
    }
    Ok(SolutionPath { nodes, taus })
}

/// One resolution level of a convergence study.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub l2_error: f64,
    pub mean_error: f64,
}

/// Endpoint errors per mesh size with fitted log-log slopes.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub mode: Mode,
    pub r: u32,
    pub replications: usize,
    pub rows: Vec<ConvergenceRow>,
    /// Fitted order of the root-mean-square endpoint error.
    pub l2_slope: f64,
    /// Fitted order of the magnitude of the mean endpoint error.
    pub mean_slope: f64,
}

fn fit_slope(ns: &[usize], errs: &[f64]) -> f64 {
    // least squares of ln(err) against ln(1/n)
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .zip(errs)
        .filter(|(_, &e)| e > 0.0 && e.is_finite())
        .map(|(&n, &e)| (-(n as f64).ln(), e.ln()))
        .collect();
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (m * sxy - sx * sy) / (m * sxx - sx * sx)
}

/// Measure endpoint errors against a supplied exact endpoint value over a
/// list of mesh sizes, replicated across independent streams in randomized
/// mode, and fit convergence orders.
#[allow(clippy::too_many_arguments)]
pub fn convergence_study(
    ivp: &IvpSpec,
    oracle: &dyn DerivativeOracle,
    exact_endpoint: &[f64],
    r: Order,
    n_list: &[usize],
    replications: usize,
    seed: RngSeed,
    mode: Mode,
) -> Result<ConvergenceReport> {
    if n_list.is_empty() {
        return Err(Error::Domain("empty mesh list".into()));
    }
    let reps = match mode {
        Mode::Randomized => replications.max(1),
        Mode::Deterministic => 1,
    };
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let partials: Vec<(f64, Vec<f64>)> = (0..reps)
            .into_par_iter()
            .map(|rep| {
                let cfg = SchemeConfig { r, n, seed: seed.stream(rep as u64), mode };
                let path = integrate(ivp, &cfg, oracle)?;
                let end = path.endpoint();
                let sq: f64 = end
                    .iter()
                    .zip(exact_endpoint)
                    .map(|(v, e)| (v - e) * (v - e))
                    .sum();
                let diff: Vec<f64> = end.iter().zip(exact_endpoint).map(|(v, e)| v - e).collect();
                Ok::<_, Error>((sq, diff))
            })
            .collect::<Result<_>>()?;
        let dim = exact_endpoint.len();
        let mut sq_sum = 0.0;
        let mut mean_diff = vec![0.0; dim];
        for (sq, diff) in &partials {
            sq_sum += sq;
            for (m, d) in mean_diff.iter_mut().zip(diff) {
                *m += d;
            }
        }
        let l2 = (sq_sum / reps as f64).sqrt();
        let mean_err = mean_diff
            .iter()
            .map(|m| (m / reps as f64).powi(2))
            .sum::<f64>()
            .sqrt();
        rows.push(ConvergenceRow { n, l2_error: l2, mean_error: mean_err });
    }
    let ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    let l2s: Vec<f64> = rows.iter().map(|r| r.l2_error).collect();
    let means: Vec<f64> = rows.iter().map(|r| r.mean_error).collect();
    Ok(ConvergenceReport {
        mode,
        r: r.r(),
        replications: reps,
        l2_slope: fit_slope(&ns, &l2s),
        mean_slope: fit_slope(&ns, &means),
        rows,
    })
}
