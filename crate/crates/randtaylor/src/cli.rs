//! Command-line surface: point evaluation, region rasterization and
//! contouring, the counterexample verifier, Monte Carlo comparison, and the
//! convergence harness. Every file-producing command writes a manifest with
//! parameters, seed, and SHA-256 digests so runs can be reproduced.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::complex::{to_complex_value, ComplexValue, Order, RationalComplex};
use crate::error::{Error, Result};
use crate::montecarlo::empirical_classification;
use crate::quadrature::QuadratureConfig;
use crate::regions::export::{contours_to_json, contours_to_svg, raster_to_csv, raster_to_json};
use crate::regions::{contours, scan, GridSpec};
use crate::remarks::{run_remarks, RemarkExpectations};
use crate::rng::RngSeed;
use crate::scheme::{convergence_study, IvpSpec, LinearOracle, Mode};
use crate::stability::{classify, ms_function_exact, ref_sq_exact};

/// Exit codes: 0 success, 1 check failure, 2 usage, 3 IO.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "randtaylor", version, about = "Probabilistic stability regions of randomized Taylor schemes")]
pub struct Cli {
    /// Worker thread count (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate F, G, and the reference magnitude at one point.
    Eval {
        /// Scheme order r.
        #[arg(short)]
        r: u32,
        /// Point z = λh as "a+bi"; components decimal or "p/q".
        #[arg(short, allow_hyphen_values = true)]
        z: String,
        /// Print F and ref_sq as exact fractions (rational arithmetic).
        #[arg(long)]
        exact: bool,
    },
    /// Rasterize the three regions over a window; writes CSV + JSON.
    Region {
        #[arg(short)]
        r: u32,
        #[command(flatten)]
        grid: GridArgs,
        /// Output basename; writes <out>.csv, <out>.json, <out>.manifest.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract region boundary contours; writes SVG + JSON.
    Contour {
        #[arg(short)]
        r: u32,
        #[command(flatten)]
        grid: GridArgs,
        /// Output basename; writes <out>.svg, <out>.json, <out>.manifest.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify the published counterexample constants; nonzero exit on any mismatch.
    Remarks {
        /// Run only the bitwise rational-arithmetic checks.
        #[arg(long)]
        exact_only: bool,
    },
    /// Monte Carlo estimate of F and G with a CI comparison against the analytic values.
    Mc {
        #[arg(short)]
        r: u32,
        #[arg(short, allow_hyphen_values = true)]
        z: String,
        /// Sample count for the empirical moments.
        #[arg(short, default_value_t = 1_000_000)]
        n: u64,
        /// Horizon (steps) for the long-run trajectory diagnostic.
        #[arg(short, default_value_t = 100_000)]
        k: u64,
        /// RNG seed; generated and recorded if omitted.
        #[arg(long)]
        seed: Option<u64>,
        /// Optional output file for the JSON report (stdout otherwise).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convergence study on the linear test problem y' = λy.
    Converge {
        #[arg(short)]
        r: u32,
        /// Real λ of the test problem.
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        /// Mesh sizes, doubling from --n-min for --levels levels.
        #[arg(long, default_value_t = 8)]
        n_min: usize,
        #[arg(long, default_value_t = 7)]
        levels: u32,
        /// Replications per mesh size (randomized mode).
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        /// Use the deterministic Taylor method instead of the randomized one.
        #[arg(long)]
        deterministic: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct GridArgs {
    /// Window "re_min,re_max,im_min,im_max".
    #[arg(long, default_value = "-6,2,-6,6", allow_hyphen_values = true)]
    pub window: String,
    /// Nodes per axis.
    #[arg(long, default_value_t = 400)]
    pub res: usize,
    /// Marginal band half-width around the thresholds.
    #[arg(long, default_value_t = 1e-9)]
    pub band: f64,
}

impl GridArgs {
    fn to_spec(&self) -> Result<GridSpec> {
        let parts: Vec<f64> = self
            .window
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Domain(format!("bad window component {s:?}"))))
            .collect::<Result<_>>()?;
        if parts.len() != 4 {
            return Err(Error::Domain("window needs four comma-separated numbers".into()));
        }
        let spec = GridSpec {
            re_min: parts[0],
            re_max: parts[1],
            im_min: parts[2],
            im_max: parts[3],
            nx: self.res,
            ny: self.res,
            band: self.band,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Parsed complex literal, kept exact when both components are rational.
#[derive(Debug, Clone)]
pub struct ComplexLiteral {
    pub value: ComplexValue,
    pub exact: Option<RationalComplex>,
}

fn parse_rational_component(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.parse().ok()?;
        let d: BigInt = den.parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let joined = format!("{int_part}{frac_part}");
    let n: BigInt = joined.parse().ok()?;
    let d = BigInt::from(10).pow(frac_part.len() as u32);
    Some(BigRational::new(BigInt::from(sign) * n, d))
}

/// Parse "a+bi" / "a-bi" with decimal or "p/q" components.
pub fn parse_complex(input: &str) -> Result<ComplexLiteral> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Domain(format!("cannot parse complex literal {input:?}; expected \"a+bi\" with decimal or p/q components"));
    let body = s.strip_suffix('i').ok_or_else(bad)?;
    // split at the last sign that starts the imaginary component
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(k, c)| (c == '+' || c == '-') && body.as_bytes()[k - 1] != b'/')
        .map(|(k, _)| k)
        .last()
        .ok_or_else(bad)?;
    let (re_str, rest) = body.split_at(split);
    let (sign, im_str) = match rest.as_bytes()[0] {
        b'+' => (1.0, &rest[1..]),
        _ => (-1.0, &rest[1..]),
    };
    let im_str = if im_str.is_empty() { "1" } else { im_str };
    let re_exact = parse_rational_component(re_str);
    let im_exact = parse_rational_component(im_str);
    let (re, im) = match (&re_exact, &im_exact) {
        (Some(re), Some(im)) => {
            let approx = to_complex_value(&RationalComplex::new(re.clone(), im.clone()));
            (approx.re, approx.im)
        }
        _ => return Err(bad()),
    };
    let exact = re_exact.zip(im_exact).map(|(re, im)| {
        let im = if sign < 0.0 { -im } else { im };
        RationalComplex::new(re, im)
    });
    Ok(ComplexLiteral { value: ComplexValue::new(re, sign * im), exact })
}

#[derive(Serialize)]
struct ManifestOutput {
    path: String,
    sha256: String,
}

/// Reproducibility record written alongside every artifact.
#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    pub wall_ms: u128,
    outputs: Vec<ManifestOutput>,
}

impl RunManifest {
    fn new(command: &str, parameters: serde_json::Value, seed: Option<u64>, started: Instant) -> Self {
        RunManifest {
            command: command.into(),
            parameters,
            seed,
            version: env!("CARGO_PKG_VERSION").into(),
            wall_ms: started.elapsed().as_millis(),
            outputs: Vec::new(),
        }
    }

    fn record(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        fs::write(path, bytes)?;
        let digest = Sha256::digest(bytes);
        let mut hex = String::with_capacity(64);
        for b in digest {
            write!(hex, "{b:02x}").expect("string write");
        }
        self.outputs.push(ManifestOutput { path: path.display().to_string(), sha256: hex });
        Ok(())
    }

    fn write(&mut self, base: &Path, started: Instant) -> Result<()> {
        self.wall_ms = started.elapsed().as_millis();
        let path = base.with_extension("manifest.json");
        let body = serde_json::to_vec_pretty(self).map_err(std::io::Error::other)?;
        fs::write(path, body)?;
        Ok(())
    }
}

fn generated_seed(explicit: Option<u64>) -> u64 {
    explicit.unwrap_or_else(|| {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0)
    })
}

fn emit_report<T: Serialize>(report: &T, seed: Option<u64>, command: &str, params: serde_json::Value, out: Option<&Path>, started: Instant) -> Result<()> {
    let body = serde_json::to_vec_pretty(report).map_err(std::io::Error::other)?;
    match out {
        Some(path) => {
            let mut manifest = RunManifest::new(command, params, seed, started);
            manifest.record(path, &body)?;
            manifest.write(path, started)?;
            println!("wrote {}", path.display());
        }
        None => println!("{}", String::from_utf8_lossy(&body)),
    }
    Ok(())
}

fn cmd_eval(r: u32, z: &str, exact: bool) -> Result<i32> {
    let r = Order::new(r)?;
    let lit = parse_complex(z)?;
    let cfg = QuadratureConfig::default();
    let verdict = classify(r, lit.value, 1e-9, &cfg)?;
    println!("r = {}, z = {} + {}i", r.r(), lit.value.re, lit.value.im);
    if exact {
        let zq = lit
            .exact
            .as_ref()
            .ok_or_else(|| Error::Domain("--exact requires rational components".into()))?;
        println!("F      = {}", ms_function_exact(r, zq));
        println!("ref_sq = {}", ref_sq_exact(r, zq));
    } else {
        println!("F      = {:.12}", verdict.f_value);
        println!("ref_sq = {:.12}", verdict.ref_sq_value);
    }
    println!("G      = {:.12}", verdict.g_value);
    println!(
        "verdict: MS {} | AS {} | ref {}",
        verdict.in_ms.as_str(),
        verdict.in_as.as_str(),
        verdict.in_ref.as_str()
    );
    Ok(EXIT_OK)
}

fn cmd_region(r: u32, grid: &GridArgs, out: &Path, started: Instant) -> Result<i32> {
    let order = Order::new(r)?;
    let spec = grid.to_spec()?;
    let raster = scan(order, &spec, &QuadratureConfig::default())?;
    let params = serde_json::json!({ "r": r, "window": grid.window, "res": grid.res, "band": grid.band });
    let mut manifest = RunManifest::new("region", params, None, started);
    let mut csv = Vec::new();
    raster_to_csv(&raster, &mut csv)?;
    manifest.record(&out.with_extension("csv"), &csv)?;
    let mut json = Vec::new();
    raster_to_json(&raster, &mut json)?;
    manifest.record(&out.with_extension("json"), &json)?;
    manifest.write(out, started)?;
    println!("wrote {} + .json + .manifest.json ({} nodes)", out.with_extension("csv").display(), spec.nx * spec.ny);
    Ok(EXIT_OK)
}

fn cmd_contour(r: u32, grid: &GridArgs, out: &Path, started: Instant) -> Result<i32> {
    let order = Order::new(r)?;
    let spec = grid.to_spec()?;
    let raster = scan(order, &spec, &QuadratureConfig::default())?;
    let cs = contours(&raster);
    let params = serde_json::json!({ "r": r, "window": grid.window, "res": grid.res, "band": grid.band });
    let mut manifest = RunManifest::new("contour", params, None, started);
    let mut svg = Vec::new();
    contours_to_svg(&cs, &spec, &mut svg)?;
    manifest.record(&out.with_extension("svg"), &svg)?;
    let mut json = Vec::new();
    contours_to_json(&cs, &spec, r, &mut json)?;
    manifest.record(&out.with_extension("json"), &json)?;
    manifest.write(out, started)?;
    println!(
        "wrote {} + .json + .manifest.json (ms {}, as {}, ref {} polylines)",
        out.with_extension("svg").display(),
        cs.ms.len(),
        cs.r#as.len(),
        cs.r#ref.len()
    );
    Ok(EXIT_OK)
}

fn cmd_remarks(exact_only: bool) -> Result<i32> {
    let cfg = QuadratureConfig::default();
    let checks = run_remarks(&RemarkExpectations::published(), exact_only, &cfg)?;
    let mut failed = 0usize;
    for c in &checks {
        let status = if c.passed { "pass" } else { "FAIL" };
        let kind = if c.exact { "exact " } else { "approx" };
        println!("[{status}] {kind} {}", c.name);
        if !c.passed {
            println!("        expected {} but computed {}", c.expected, c.computed);
            failed += 1;
        }
    }
    println!("{}/{} checks passed", checks.len() - failed, checks.len());
    Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_mc(r: u32, z: &str, n: u64, k: u64, seed: Option<u64>, out: Option<&Path>, started: Instant) -> Result<i32> {
    let order = Order::new(r)?;
    let lit = parse_complex(z)?;
    let seed_value = generated_seed(seed);
    let report = empirical_classification(order, lit.value, n, k, RngSeed::new(seed_value, 0), &QuadratureConfig::default())?;
    let params = serde_json::json!({ "r": r, "z": z, "n": n, "k": k, "seed": seed_value });
    #[derive(Serialize)]
    struct McEnvelope<'a> {
        seed: u64,
        #[serde(flatten)]
        report: &'a crate::montecarlo::ComparisonReport,
    }
    emit_report(&McEnvelope { seed: seed_value, report: &report }, Some(seed_value), "mc", params, out, started)?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_converge(
    r: u32,
    lambda: f64,
    n_min: usize,
    levels: u32,
    reps: usize,
    deterministic: bool,
    seed: Option<u64>,
    out: Option<&Path>,
    started: Instant,
) -> Result<i32> {
    let order = Order::new(r)?;
    let mode = if deterministic { Mode::Deterministic } else { Mode::Randomized };
    let seed_value = generated_seed(seed);
    let ivp = IvpSpec::new(
        0.0,
        1.0,
        vec![1.0],
        std::sync::Arc::new(move |_t: f64, v: &[f64]| vec![lambda * v[0]]),
    )?;
    let oracle = LinearOracle::scalar(lambda);
    let exact = vec![lambda.exp()];
    let n_list: Vec<usize> = (0..levels).map(|k| n_min << k).collect();
    let report = convergence_study(&ivp, &oracle, &exact, order, &n_list, reps, RngSeed::new(seed_value, 0), mode)?;
    let params = serde_json::json!({
        "r": r, "lambda": lambda, "n_min": n_min, "levels": levels,
        "reps": reps, "deterministic": deterministic, "seed": seed_value,
    });
    #[derive(Serialize)]
    struct ConvergeEnvelope<'a> {
        seed: u64,
        #[serde(flatten)]
        report: &'a crate::scheme::ConvergenceReport,
    }
    emit_report(&ConvergeEnvelope { seed: seed_value, report: &report }, Some(seed_value), "converge", params, out, started)?;
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli) -> Result<i32> {
    if let Some(threads) = cli.threads {
        // ignore the error if a global pool already exists (tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let started = Instant::now();
    match cli.command {
        Command::Eval { r, z, exact } => cmd_eval(r, &z, exact),
        Command::Region { r, grid, out } => cmd_region(r, &grid, &out, started),
        Command::Contour { r, grid, out } => cmd_contour(r, &grid, &out, started),
        Command::Remarks { exact_only } => cmd_remarks(exact_only),
        Command::Mc { r, z, n, k, seed, out } => cmd_mc(r, &z, n, k, seed, out.as_deref(), started),
        Command::Converge { r, lambda, n_min, levels, reps, deterministic, seed, out } => {
            cmd_converge(r, lambda, n_min, levels, reps, deterministic, seed, out.as_deref(), started)
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_IO,
        Error::Domain(_) | Error::OrderTooLarge(_) | Error::GridTooLarge(_) => EXIT_USAGE,
        _ => EXIT_CHECK_FAILED,
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            // keep clap's code for --help/--version, force 2 for real usage errors
            let code = if err.exit_code() == 0 { 0 } else { EXIT_USAGE };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}
