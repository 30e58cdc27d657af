//! End-to-end acceptance checks, one per published claim or contract, each
//! printing a single pass/fail line. Run with `--nocapture` to see them.

use std::sync::LazyLock;

use num_bigint::BigInt;
use num_rational::BigRational;

use randtaylor::complex::{f_eval, rational_complex, step_coeffs};
use randtaylor::montecarlo::{empirical_f, empirical_g};
use randtaylor::quadrature::{adaptive_integrate, locate_step_root};
use randtaylor::regions::{
    contours, estimate_gamma, min_order_for_ms, region_components, scan, stable_cell_outside_radius, GridSpec,
    RegionRaster,
};
use randtaylor::rng::{CounterRng, RngSeed};
use randtaylor::scheme::{integrate, IvpSpec, LinearOracle, Mode, SchemeConfig};
use randtaylor::stability::{as_function, as_function_detail, ms_function_exact, ref_sq_exact};
use randtaylor::{classify, ms_function, Membership, Order, QuadratureConfig};

fn ord(r: u32) -> Order {
    Order::new(r).unwrap()
}

fn report(criterion: &str, passed: bool) {
    println!("[{}] {criterion}", if passed { "PASS" } else { "FAIL" });
    assert!(passed, "{criterion}");
}

fn frac(n: &str, d: &str) -> BigRational {
    BigRational::new(n.parse::<BigInt>().unwrap(), d.parse::<BigInt>().unwrap())
}

/// Standard-window rasters for r = 0..4, shared by the scan-based criteria.
static RASTERS: LazyLock<Vec<RegionRaster>> = LazyLock::new(|| {
    let spec = GridSpec::standard(800, 800);
    let cfg = QuadratureConfig::default();
    (0..=4).map(|r| scan(ord(r), &spec, &cfg).unwrap()).collect()
});

#[test]
fn criterion_01_exact_fractions() {
    let zb = rational_complex(-3, 100, 19, 10);
    let za = rational_complex(-3, 5, 14, 5);
    let mut ok = true;
    ok &= ms_function_exact(ord(2), &zb) == frac("2460549996776228711", "2520000000000000000");
    ok &= ms_function_exact(ord(3), &zb) == frac("531703423127449318399669", "518400000000000000000000");
    ok &= ms_function_exact(ord(1), &rational_complex(1, 100, 1, 1)) == frac("19772000147001", "20000000000000");
    ok &= ref_sq_exact(ord(2), &za) == frac("253409", "360000");
    ok &= ref_sq_exact(ord(3), &za) == frac("5828357", "5625000");
    // the published order-4 fractions are the square of the squared magnitude
    let sq = |z| {
        let v = ref_sq_exact(ord(4), &z);
        &v * &v
    };
    ok &= sq(rational_complex(3, 4, 7, 2)) == frac("27473196877335817540321", "121029087867608368152576");
    ok &= sq(rational_complex(-1, 4, 5, 2)) == frac("48715333577673689545536241", "75643179917255230095360000");
    ok &= sq(rational_complex(1, 4, 3, 1)) == frac("9427129581150440422815049", "3025727196690209203814400");
    report("criterion 1: exact fractions reproduced bitwise in rational arithmetic", ok);
}

#[test]
fn criterion_02_g_values() {
    let cfg = QuadratureConfig::default();
    let cases: [(u32, f64, f64, f64); 7] = [
        (0, -2.1, 0.0, -0.07784),
        (0, -1.0, 1.6, 0.13565),
        (3, -0.25, 2.75, -0.41731),
        (4, -0.25, 2.75, 0.06505),
        (4, -0.5, 2.0, -0.50028),
        (4, 0.25, 3.25, -0.47024),
        (4, -0.125, 2.625, 0.03656),
    ];
    let ok = cases.iter().all(|&(r, re, im, want)| {
        let g = as_function(ord(r), num_complex::Complex::new(re, im), &cfg).unwrap();
        (g - want).abs() <= 1e-4
    });
    report("criterion 2: seven published G values reproduced to ±1e-4", ok);
}

#[test]
fn criterion_03_inclusion_audit() {
    let mut violations = 0usize;
    for raster in RASTERS.iter() {
        for v in &raster.verdicts {
            if v.in_ms == Membership::In && (v.in_ref == Membership::Out || v.in_as == Membership::Out) {
                violations += 1;
            }
        }
    }
    report(
        &format!("criterion 3: MS ⊂ ref ∩ AS holds on 800×800 × r=0..4 standard scans ({violations} violations)"),
        violations == 0,
    );
}

#[test]
fn criterion_04_conjugation_symmetry() {
    let rng = CounterRng::new(RngSeed::new(0x5ca1ab1e, 0));
    let cfg = QuadratureConfig::default();
    let mut ok = true;
    for i in 0..1000u64 {
        let r = ord((rng.u64_at(4 * i) % 5) as u32);
        // rational z with small denominators in the standard window
        let num_re = (rng.u64_at(4 * i + 1) % 1601) as i64 - 1200; // re ∈ [-6, 2]
        let num_im = (rng.u64_at(4 * i + 2) % 2401) as i64 - 1200; // im ∈ [-6, 6]
        let z = rational_complex(num_re, 200, num_im, 200);
        let zc = num_complex::Complex::new(z.re.clone(), -z.im.clone());
        ok &= ms_function_exact(r, &z) == ms_function_exact(r, &zc);
        ok &= ref_sq_exact(r, &z) == ref_sq_exact(r, &zc);
        if i < 200 {
            let zf = num_complex::Complex::new(num_re as f64 / 200.0, num_im as f64 / 200.0);
            let g = as_function(r, zf, &cfg).unwrap();
            let gc = as_function(r, zf.conj(), &cfg).unwrap();
            ok &= (g - gc).abs() <= 1e-8;
        }
    }
    report("criterion 4: conjugation symmetry exact for F/ref_sq (1000 pts), ≤1e-8 for G", ok);
}

#[test]
fn criterion_05_boundedness() {
    let cfg = QuadratureConfig::default();
    let mut ok = true;
    let mut gammas = Vec::new();
    for r in 0..=4u32 {
        let est = estimate_gamma(ord(r), 720, &cfg).unwrap();
        ok &= est.gamma.is_finite();
        if r == 0 {
            ok &= est.gamma > 2.1;
        }
        ok &= !stable_cell_outside_radius(&RASTERS[r as usize], est.gamma * 1.01);
        gammas.push(est.gamma);
    }
    report(
        &format!("criterion 5: γ_r finite for r=0..4 ({gammas:.3?}), γ₀ > 2.1, no stable cell outside 1.01·γ_r"),
        ok,
    );
}

#[test]
fn criterion_06_left_half_plane_coverage() {
    let rng = CounterRng::new(RngSeed::new(0xc0ffee, 0));
    let cap = ord(24);
    let mut failures = 0usize;
    for i in 0..100u64 {
        let re = -5.0 + 4.95 * rng.uniform_at(2 * i);
        let im = -5.0 + 10.0 * rng.uniform_at(2 * i + 1);
        if min_order_for_ms(num_complex::Complex::new(re, im), cap).is_none() {
            failures += 1;
        }
    }
    report(
        &format!("criterion 6: min order ≤ 24 found for 100 random left-half-plane points ({failures} failures)"),
        failures == 0,
    );
}

#[test]
fn criterion_07_monte_carlo_cross_validation() {
    let rng = CounterRng::new(RngSeed::new(0xfeed, 0));
    let cfg = QuadratureConfig::default();
    let mut g_hits = 0usize;
    let mut f_hits = 0usize;
    for i in 0..50u64 {
        let r = ord((rng.u64_at(3 * i) % 5) as u32);
        let mag = 4.0 * rng.uniform_at(3 * i + 1);
        let theta = 2.0 * std::f64::consts::PI * rng.uniform_at(3 * i + 2);
        let z = num_complex::Complex::from_polar(mag, theta);
        let g_ref = match as_function(r, z, &cfg) {
            Ok(g) => g,
            Err(randtaylor::Error::NonConvergent { estimate, .. }) => estimate,
            Err(e) => panic!("{e}"),
        };
        let f_ref = ms_function(r, z);
        let seed = RngSeed::new(0xace0 + i, 0);
        let g_est = empirical_g(r, z, 1_000_000, seed.stream(1)).unwrap();
        let f_est = empirical_f(r, z, 1_000_000, seed.stream(2)).unwrap();
        if (g_est.mean - g_ref).abs() <= g_est.ci_halfwidth {
            g_hits += 1;
        }
        if (f_est.mean - f_ref).abs() <= f_est.ci_halfwidth {
            f_hits += 1;
        }
    }
    report(
        &format!("criterion 7: 3σ Monte Carlo CIs cover analytic values (G {g_hits}/50, F {f_hits}/50, need ≥47)"),
        g_hits >= 47 && f_hits >= 47,
    );
}

#[test]
fn criterion_08_closed_form_vs_oracle() {
    let rng = CounterRng::new(RngSeed::new(0xbead, 0));
    let cfg = QuadratureConfig::default();
    let mut ok = true;
    for i in 0..100u64 {
        let r = ord((rng.u64_at(3 * i) % 5) as u32);
        let z = num_complex::Complex::new(
            -6.0 + 8.0 * rng.uniform_at(3 * i + 1),
            -6.0 + 12.0 * rng.uniform_at(3 * i + 2),
        );
        let brute = adaptive_integrate(|t| f_eval(r, z, t).unwrap().norm_sqr(), 0.0, 1.0, &cfg).unwrap();
        ok &= (ms_function(r, z) - brute).abs() <= 1e-10;
    }
    let mut accepted = 0u64;
    let mut i = 0u64;
    while accepted < 200 {
        let r = ord((rng.u64_at(1000 + 3 * i) % 5) as u32);
        let z = num_complex::Complex::new(
            -6.0 + 8.0 * rng.uniform_at(1000 + 3 * i + 1),
            -6.0 + 12.0 * rng.uniform_at(1000 + 3 * i + 2),
        );
        i += 1;
        if z.norm() < 1e-6 {
            continue;
        }
        // skip points whose step function vanishes inside [0, 1]
        if locate_step_root(r, z, 1e-6).map(|rep| rep.has_real_root).unwrap_or(false) {
            continue;
        }
        let detail = as_function_detail(r, z, &cfg).unwrap();
        ok &= detail.disagreement() <= 1e-6;
        accepted += 1;
    }
    report("criterion 8: F matches |f|² quadrature to 1e-10 (100 pts); G routes agree to 1e-6 (200 pts)", ok);
}

#[test]
fn criterion_09_scheme_product_identity() {
    let rng = CounterRng::new(RngSeed::new(0xdade, 0));
    let mut ok = true;
    for i in 0..20u64 {
        let r = ord((rng.u64_at(4 * i) % 5) as u32);
        let lambda = -3.0 + 4.0 * rng.uniform_at(4 * i + 1);
        let n = 4 + (rng.u64_at(4 * i + 2) % 60) as usize;
        let eta = 0.5 + rng.uniform_at(4 * i + 3);
        let ivp = IvpSpec::new(
            0.0,
            1.0,
            vec![eta],
            std::sync::Arc::new(move |_t: f64, v: &[f64]| vec![lambda * v[0]]),
        )
        .unwrap();
        let cfg = SchemeConfig { r, n, seed: RngSeed::new(7000 + i, 0), mode: Mode::Randomized };
        let path = integrate(&ivp, &cfg, &LinearOracle::scalar(lambda)).unwrap();
        let z = num_complex::Complex::new(lambda / n as f64, 0.0);
        let product: f64 = path.taus.iter().map(|&tau| f_eval(r, z, tau).unwrap().re).product();
        let expect = eta * product;
        ok &= (path.endpoint()[0] - expect).abs() <= 1e-12 * expect.abs().max(1.0);
    }
    // stubbed-τ hand value: r = 0, λ = -2, h = 0.1, τ = 0.5
    let c = step_coeffs(ord(0), num_complex::Complex::new(-0.2, 0.0));
    ok &= (c.eval(0.5).re - 0.82).abs() < 1e-15;
    report("criterion 9: integrate reproduces η·∏f(τ) to 1e-12 (20 configs); 0.82 hand value", ok);
}

#[test]
fn criterion_10_convergence_slopes() {
    use randtaylor::scheme::convergence_study;
    let lambda = -2.0;
    let ivp = IvpSpec::new(
        0.0,
        1.0,
        vec![1.0],
        std::sync::Arc::new(move |_t: f64, v: &[f64]| vec![lambda * v[0]]),
    )
    .unwrap();
    let oracle = LinearOracle::scalar(lambda);
    let exact = [lambda.exp()];
    let ns = [8usize, 16, 32, 64, 128, 256, 512];
    let rand = convergence_study(&ivp, &oracle, &exact, ord(0), &ns, 1000, RngSeed::new(11, 0), Mode::Randomized).unwrap();
    let det = convergence_study(&ivp, &oracle, &exact, ord(1), &ns, 1, RngSeed::new(12, 0), Mode::Deterministic).unwrap();
    let ok = (1.2..=1.9).contains(&rand.l2_slope)
        && (1.7..=2.4).contains(&rand.mean_slope)
        && (1.7..=2.3).contains(&det.l2_slope);
    report(
        &format!(
            "criterion 10: slopes randomized L²={:.2}∈[1.2,1.9], mean={:.2}∈[1.7,2.4]; deterministic {:.2}∈[1.7,2.3]",
            rand.l2_slope, rand.mean_slope, det.l2_slope
        ),
        ok,
    );
}

#[test]
fn criterion_11_nonconvexity_and_disconnection() {
    let cfg = QuadratureConfig::default();
    let r1 = ord(1);
    let all_in = |z: num_complex::Complex<f64>| {
        let v = classify(r1, z, 1e-9, &cfg).unwrap();
        v.in_ms == Membership::In && v.in_as == Membership::In && v.in_ref == Membership::In
    };
    let mid = classify(r1, num_complex::Complex::new(0.01, 0.0), 1e-9, &cfg).unwrap();
    let mut ok = all_in(num_complex::Complex::new(0.01, 1.0))
        && all_in(num_complex::Complex::new(0.01, -1.0))
        && mid.in_ms == Membership::Out
        && mid.in_as == Membership::Out
        && mid.in_ref == Membership::Out;

    // disconnected order-4 reference region: window around the published
    // witnesses 0.75+3.5i, -0.25+2.5i, midpoint 0.25+3i
    let spec = GridSpec { re_min: -1.0, re_max: 1.5, im_min: 1.5, im_max: 4.5, nx: 301, ny: 301, band: 1e-9 };
    let raster = scan(ord(4), &spec, &cfg).unwrap();
    let components = region_components(&raster, |v| v.in_ref);
    let cs = contours(&raster);
    ok &= components >= 2 && cs.r#ref.len() >= 2;
    report(
        &format!("criterion 11: 0.01±i in / 0.01 out (r=1); order-4 ref region splits into {components} components, {} polylines", cs.r#ref.len()),
        ok,
    );
}
