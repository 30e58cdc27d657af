//! Marching-squares level-set extraction from the stored scalar values of
//! a raster, with sub-cell precision via linear interpolation along cell
//! edges. Saddle cells are disambiguated by sampling the cell-center value.

use std::collections::HashMap;

use serde::Serialize;

use super::{GridSpec, RegionRaster};

/// A chain of (re, im) vertices; closed when first == last.
pub type Polyline = Vec<(f64, f64)>;

/// Boundary polylines per region at thresholds F = 1, G = 0, ref_sq = 1.
#[derive(Debug, Clone, Serialize)]
pub struct ContourSet {
    pub ms: Vec<Polyline>,
    pub r#as: Vec<Polyline>,
    pub r#ref: Vec<Polyline>,
}

impl ContourSet {
    pub fn is_empty(&self) -> bool {
        self.ms.is_empty() && self.r#as.is_empty() && self.r#ref.is_empty()
    }
}

/// Identifier of a grid edge: (i, j) of its lower-left node plus
/// orientation. Used to key segment endpoints so chains connect exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum EdgeKey {
    /// Horizontal edge from node (i, j) to (i+1, j).
    H(usize, usize),
    /// Vertical edge from node (i, j) to (i, j+1).
    V(usize, usize),
}

fn interpolate(spec: &GridSpec, key: EdgeKey, values: &[f64]) -> (f64, f64) {
    let nx = spec.nx;
    match key {
        EdgeKey::H(i, j) => {
            let (a, b) = (values[j * nx + i], values[j * nx + i + 1]);
            let t = if (b - a).abs() < 1e-300 { 0.5 } else { (-a / (b - a)).clamp(0.0, 1.0) };
            let x0 = spec.re_at(i);
            let x1 = spec.re_at(i + 1);
            (x0 + t * (x1 - x0), spec.im_at(j))
        }
        EdgeKey::V(i, j) => {
            let (a, b) = (values[j * nx + i], values[(j + 1) * nx + i]);
            let t = if (b - a).abs() < 1e-300 { 0.5 } else { (-a / (b - a)).clamp(0.0, 1.0) };
            let y0 = spec.im_at(j);
            let y1 = spec.im_at(j + 1);
            (spec.re_at(i), y0 + t * (y1 - y0))
        }
    }
}

/// Extract all zero-level polylines of a node-sampled scalar field.
fn extract_level(spec: &GridSpec, values: &[f64]) -> Vec<Polyline> {
    let nx = spec.nx;
    let inside = |i: usize, j: usize| values[j * nx + i] < 0.0;

    // Collect crossing segments per cell as pairs of edge keys.
    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for j in 0..spec.ny - 1 {
        for i in 0..nx - 1 {
            let code = (inside(i, j) as u8)
                | (inside(i + 1, j) as u8) << 1
                | (inside(i + 1, j + 1) as u8) << 2
                | (inside(i, j + 1) as u8) << 3;
            let bottom = EdgeKey::H(i, j);
            let top = EdgeKey::H(i, j + 1);
            let left = EdgeKey::V(i, j);
            let right = EdgeKey::V(i + 1, j);
            match code {
                0 | 15 => {}
                1 | 14 => segments.push((left, bottom)),
                2 | 13 => segments.push((bottom, right)),
                3 | 12 => segments.push((left, right)),
                4 | 11 => segments.push((right, top)),
                6 | 9 => segments.push((bottom, top)),
                7 | 8 => segments.push((top, left)),
                5 | 10 => {
                    // Saddle: decide by the cell-center value.
                    let center = 0.25
                        * (values[j * nx + i]
                            + values[j * nx + i + 1]
                            + values[(j + 1) * nx + i]
                            + values[(j + 1) * nx + i + 1]);
                    let center_inside = center < 0.0;
                    if (code == 5) == center_inside {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    } else {
                        segments.push((left, top));
                        segments.push((right, bottom));
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    // Chain segments into polylines via edge-key adjacency.
    let mut adjacency: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (idx, (a, b)) in segments.iter().enumerate() {
        adjacency.entry(*a).or_default().push(idx);
        adjacency.entry(*b).or_default().push(idx);
    }
    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a0, b0) = segments[start];
        let mut chain = vec![a0, b0];
        // extend forward from the tail, then from the head
        for end in 0..2 {
            loop {
                let tip = if end == 0 { *chain.last().unwrap() } else { chain[0] };
                let next = adjacency
                    .get(&tip)
                    .and_then(|ids| ids.iter().find(|&&i| !used[i]).copied());
                let Some(idx) = next else { break };
                used[idx] = true;
                let (a, b) = segments[idx];
                let other = if a == tip { b } else { a };
                if end == 0 {
                    chain.push(other);
                } else {
                    chain.insert(0, other);
                }
                if chain[0] == *chain.last().unwrap() {
                    break;
                }
            }
        }
        let pts: Polyline = chain.iter().map(|&k| interpolate(spec, k, values)).collect();
        if pts.len() >= 2 {
            polylines.push(pts);
        }
    }
    polylines
}

/// Extract boundary polylines for all three regions from the stored scalar
/// values (not the tri-states), so precision is sub-cell.
pub fn contours(raster: &RegionRaster) -> ContourSet {
    let spec = &raster.spec;
    let field = |pick: &dyn Fn(&crate::stability::StabilityVerdict) -> f64| -> Vec<f64> {
        raster.verdicts.iter().map(pick).collect()
    };
    let ms_values = field(&|v| v.f_value - 1.0);
    let as_values = field(&|v| v.g_value);
    let ref_values = field(&|v| v.ref_sq_value - 1.0);
    ContourSet {
        ms: extract_level(spec, &ms_values),
        r#as: extract_level(spec, &as_values),
        r#ref: extract_level(spec, &ref_values),
    }
}
