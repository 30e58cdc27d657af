//! Rasterize and contour the stability regions over complex windows,
//! estimate the boundedness radius, audit the theorem-level inclusions,
//! and probe left-half-plane coverage.

mod contour;
pub mod export;

pub use contour::{contours, ContourSet, Polyline};
pub use export::{contours_to_json, contours_to_svg, raster_to_csv, raster_to_json};

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{ComplexValue, Order};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureConfig;
use crate::stability::{classify, is_stable_any, ms_function, ref_sq, Membership, StabilityVerdict};

/// Hard cap on raster size.
pub const GRID_NODE_CAP: usize = 100_000_000;

/// A rectangular window in the complex plane with a node-centered grid
/// (endpoints inclusive) and the marginal classification band.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
    pub band: f64,
}

impl GridSpec {
    /// Default window for r <= 4: contains every region of the figure and
    /// every published witness point.
    pub fn standard(nx: usize, ny: usize) -> Self {
        GridSpec { re_min: -6.0, re_max: 2.0, im_min: -6.0, im_max: 6.0, nx, ny, band: 1e-9 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.re_min < self.re_max && self.im_min < self.im_max) {
            return Err(Error::Domain("window bounds out of order".into()));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::Domain("grid needs at least 2x2 nodes".into()));
        }
        let n = self.nx.checked_mul(self.ny).ok_or(Error::GridTooLarge(usize::MAX))?;
        if n > GRID_NODE_CAP {
            return Err(Error::GridTooLarge(n));
        }
        if self.band < 0.0 {
            return Err(Error::Domain("band must be nonnegative".into()));
        }
        Ok(())
    }

    #[inline]
    pub fn re_at(&self, i: usize) -> f64 {
        self.re_min + (self.re_max - self.re_min) * i as f64 / (self.nx - 1) as f64
    }

    #[inline]
    pub fn im_at(&self, j: usize) -> f64 {
        self.im_min + (self.im_max - self.im_min) * j as f64 / (self.ny - 1) as f64
    }

    /// True when the window is symmetric about the real axis so that the
    /// grid rows mirror exactly.
    pub fn conjugation_symmetric(&self) -> bool {
        (self.im_min + self.im_max).abs() <= 1e-12 * (self.im_max - self.im_min)
    }
}

/// Classified grid, row-major with rows running along the real axis.
#[derive(Debug, Clone, Serialize)]
pub struct RegionRaster {
    pub spec: GridSpec,
    pub r: u32,
    pub verdicts: Vec<StabilityVerdict>,
}

impl RegionRaster {
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &StabilityVerdict {
        &self.verdicts[j * self.spec.nx + i]
    }

    /// Cell-count area of one region (In cells only) in window units.
    pub fn area(&self, pick: impl Fn(&StabilityVerdict) -> Membership) -> f64 {
        let cell = (self.spec.re_max - self.spec.re_min) / (self.spec.nx - 1) as f64
            * (self.spec.im_max - self.spec.im_min) / (self.spec.ny - 1) as f64;
        self.verdicts.iter().filter(|v| pick(v) == Membership::In).count() as f64 * cell
    }
}

/// Classify every grid node. Deterministic given inputs; on a window that
/// is symmetric about the real axis only the upper half is computed and
/// the lower half is mirrored (F, G and the reference magnitude are all
/// invariant under conjugation).
pub fn scan(r: Order, spec: &GridSpec, cfg: &QuadratureConfig) -> Result<RegionRaster> {
    spec.validate()?;
    let mirror = spec.conjugation_symmetric();
    let rows: Vec<Result<Vec<StabilityVerdict>>> = (0..spec.ny)
        .into_par_iter()
        .map(|j| {
            if mirror && 2 * j < spec.ny - 1 {
                // filled from the mirrored row afterwards
                return Ok(Vec::new());
            }
            let im = spec.im_at(j);
            (0..spec.nx)
                .map(|i| classify(r, ComplexValue::new(spec.re_at(i), im), spec.band, cfg))
                .collect()
        })
        .collect();
    let mut grid: Vec<Vec<StabilityVerdict>> = rows.into_iter().collect::<Result<_>>()?;
    if mirror {
        for j in 0..spec.ny {
            if 2 * j < spec.ny - 1 {
                let mirrored = grid[spec.ny - 1 - j].clone();
                grid[j] = mirrored;
            }
        }
    }
    let verdicts = grid.into_iter().flatten().collect();
    Ok(RegionRaster { spec: spec.clone(), r: r.r(), verdicts })
}

/// Sampling-based estimate of the radius beyond which no point of any of
/// the three regions exists. Existence is proven non-constructively; this
/// is a certified-by-sampling estimate, not a proof.
#[derive(Debug, Clone, Serialize)]
pub struct BoundEstimate {
    pub r: u32,
    pub gamma: f64,
    pub angular_samples: u32,
}

fn any_angle_stable(r: Order, radius: f64, angular_samples: u32, cfg: &QuadratureConfig) -> bool {
    (0..angular_samples).into_par_iter().any(|i| {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / angular_samples as f64;
        let z = ComplexValue::from_polar(radius, theta);
        if ms_function(r, z) < 1.0 || ref_sq(r, z) < 1.0 {
            return true;
        }
        let g = crate::montecarlo::analytic_g_lenient(r, z, cfg);
        g < 0.0
    })
}

/// Doubling search followed by 30 bisection steps for the boundedness
/// radius.
pub fn estimate_gamma(r: Order, angular_samples: u32, cfg: &QuadratureConfig) -> Result<BoundEstimate> {
    if angular_samples < 64 {
        return Err(Error::Domain("need at least 64 angular samples".into()));
    }
    let mut hi = 1.0f64;
    while any_angle_stable(r, hi, angular_samples, cfg) {
        hi *= 2.0;
        if hi > 65536.0 {
            return Err(Error::SearchOverflow);
        }
    }
    let mut lo = hi / 2.0;
    if hi == 1.0 {
        lo = 0.0;
    }
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if any_angle_stable(r, mid, angular_samples, cfg) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(BoundEstimate { r: r.r(), gamma: hi, angular_samples })
}

/// Smallest order whose mean-square region contains z, up to r_max.
pub fn min_order_for_ms(z: ComplexValue, r_max: Order) -> Option<Order> {
    (0..=r_max.r()).map(|r| Order::new(r).unwrap()).find(|&r| ms_function(r, z) < 1.0)
}

/// Witness confirmation of a published membership statement.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub label: String,
    pub z: [f64; 2],
    pub confirmed: bool,
    pub detail: String,
}

/// Result of the inclusion audit over a raster.
#[derive(Debug, Clone, Serialize)]
pub struct InclusionAudit {
    pub r: u32,
    pub total_cells: usize,
    /// Cells strictly in the mean-square region but strictly outside the
    /// reference or asymptotic region (marginal cells excluded).
    pub violations: usize,
    pub witnesses: Vec<Witness>,
    /// Exploratory only: connected components of each region restricted to
    /// the left half-plane (a published conjecture says each should be 1;
    /// never asserted).
    pub left_half_components: [usize; 3],
}

fn contains(spec: &GridSpec, z: ComplexValue) -> bool {
    z.re >= spec.re_min && z.re <= spec.re_max && z.im >= spec.im_min && z.im <= spec.im_max
}

fn component_count(raster: &RegionRaster, pick: impl Fn(&StabilityVerdict) -> Membership, left_only: bool) -> usize {
    let (nx, ny) = (raster.spec.nx, raster.spec.ny);
    let inside = |i: usize, j: usize| {
        (!left_only || raster.spec.re_at(i) < 0.0) && pick(raster.at(i, j)) == Membership::In
    };
    let mut seen = vec![false; nx * ny];
    let mut count = 0;
    let mut stack = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            if seen[j * nx + i] || !inside(i, j) {
                continue;
            }
            count += 1;
            stack.push((i, j));
            seen[j * nx + i] = true;
            while let Some((x, y)) = stack.pop() {
                let mut push = |nx_: usize, ny_: usize| {
                    if !seen[ny_ * nx + nx_] && inside(nx_, ny_) {
                        seen[ny_ * nx + nx_] = true;
                        stack.push((nx_, ny_));
                    }
                };
                if x > 0 {
                    push(x - 1, y);
                }
                if x + 1 < nx {
                    push(x + 1, y);
                }
                if y > 0 {
                    push(x, y - 1);
                }
                if y + 1 < ny {
                    push(x, y + 1);
                }
            }
        }
    }
    count
}

/// Count violations of "mean-square implies reference and asymptotic" over
/// a scan, and confirm the published counterexample points that fall
/// inside the window.
pub fn audit_inclusions(r: Order, spec: &GridSpec, cfg: &QuadratureConfig) -> Result<InclusionAudit> {
    let raster = scan(r, spec, cfg)?;
    let violations = raster
        .verdicts
        .iter()
        .filter(|v| {
            v.in_ms == Membership::In && (v.in_as == Membership::Out || v.in_ref == Membership::Out)
        })
        .count();

    let mut witnesses = Vec::new();
    let mut witness = |label: &str, z: ComplexValue, check: &dyn Fn(&StabilityVerdict) -> (bool, String)| {
        if !contains(spec, z) {
            return;
        }
        match classify(r, z, spec.band, cfg) {
            Ok(v) => {
                let (ok, detail) = check(&v);
                witnesses.push(Witness { label: label.into(), z: [z.re, z.im], confirmed: ok, detail });
            }
            Err(e) => {
                witnesses.push(Witness {
                    label: label.into(),
                    z: [z.re, z.im],
                    confirmed: false,
                    detail: format!("classification failed: {e}"),
                });
            }
        }
    };
    match r.r() {
        0 => {
            witness("asymptotically stable but outside the reference set", ComplexValue::new(-2.1, 0.0), &|v| {
                (
                    v.in_as == Membership::In && v.in_ref == Membership::Out,
                    format!("G = {:.5}, ref_sq = {:.5}", v.g_value, v.ref_sq_value),
                )
            });
            witness("in the reference set but not asymptotically stable", ComplexValue::new(-1.0, 1.6), &|v| {
                (
                    v.in_ref == Membership::In && v.in_as == Membership::Out,
                    format!("G = {:.5}, ref_sq = {:.5}", v.g_value, v.ref_sq_value),
                )
            });
        }
        2 => {
            witness("in the order-2 reference set (leaves at order 3)", ComplexValue::new(-0.6, 2.8), &|v| {
                (v.in_ref == Membership::In, format!("ref_sq = {:.6}", v.ref_sq_value))
            });
            witness("mean-square stable at order 2 (not at order 3)", ComplexValue::new(-0.03, 1.9), &|v| {
                (v.in_ms == Membership::In, format!("F = {:.6}", v.f_value))
            });
        }
        3 => {
            witness("outside the order-3 reference set", ComplexValue::new(-0.6, 2.8), &|v| {
                (v.in_ref == Membership::Out, format!("ref_sq = {:.6}", v.ref_sq_value))
            });
            witness("not mean-square stable at order 3", ComplexValue::new(-0.03, 1.9), &|v| {
                (v.in_ms == Membership::Out, format!("F = {:.6}", v.f_value))
            });
            witness("asymptotically stable at order 3 (not at order 4)", ComplexValue::new(-0.25, 2.75), &|v| {
                (v.in_as == Membership::In, format!("G = {:.5}", v.g_value))
            });
        }
        4 => {
            witness("not asymptotically stable at order 4", ComplexValue::new(-0.25, 2.75), &|v| {
                (v.in_as == Membership::Out, format!("G = {:.5}", v.g_value))
            });
        }
        _ => {}
    }

    let left_half_components = [
        component_count(&raster, |v| v.in_ms, true),
        component_count(&raster, |v| v.in_as, true),
        component_count(&raster, |v| v.in_ref, true),
    ];

    Ok(InclusionAudit { r: r.r(), total_cells: raster.verdicts.len(), violations, witnesses, left_half_components })
}

/// Number of connected components (4-neighborhood, In cells) of a region
/// in the raster window.
pub fn region_components(raster: &RegionRaster, pick: impl Fn(&StabilityVerdict) -> Membership) -> usize {
    component_count(raster, pick, false)
}

/// True if any In cell lies outside |z| <= radius.
pub fn stable_cell_outside_radius(raster: &RegionRaster, radius: f64) -> bool {
    let spec = &raster.spec;
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            let v = raster.at(i, j);
            if is_stable_any(v) {
                let z = ComplexValue::new(spec.re_at(i), spec.im_at(j));
                if z.norm() > radius {
                    return true;
                }
            }
        }
    }
    false
}
