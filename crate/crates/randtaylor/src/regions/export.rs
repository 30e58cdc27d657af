//! Raster and contour serialization: CSV rows per node, a compact JSON
//! envelope, stroke-only SVG paths (imaginary axis pointing up), and JSON
//! polylines.

use std::io::Write;

use serde::Serialize;

use super::{ContourSet, GridSpec, Polyline, RegionRaster};
use crate::error::Result;

/// CSV with one row per node: re, im, F, G, ref_sq, ms, as, ref.
pub fn raster_to_csv<W: Write>(raster: &RegionRaster, out: &mut W) -> Result<()> {
    writeln!(out, "re,im,F,G,ref_sq,ms,as,ref")?;
    let spec = &raster.spec;
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            let v = raster.at(i, j);
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                spec.re_at(i),
                spec.im_at(j),
                v.f_value,
                v.g_value,
                v.ref_sq_value,
                v.in_ms.as_str(),
                v.in_as.as_str(),
                v.in_ref.as_str(),
            )?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct RasterEnvelope<'a> {
    spec: &'a GridSpec,
    r: u32,
    /// Row-major cells, each [re, im, F, G, ref_sq, ms, as, ref].
    cells: Vec<[serde_json::Value; 8]>,
}

/// Compact JSON envelope {spec, r, cells}.
pub fn raster_to_json<W: Write>(raster: &RegionRaster, out: &mut W) -> Result<()> {
    let spec = &raster.spec;
    let mut cells = Vec::with_capacity(raster.verdicts.len());
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            let v = raster.at(i, j);
            cells.push([
                spec.re_at(i).into(),
                spec.im_at(j).into(),
                v.f_value.into(),
                v.g_value.into(),
                v.ref_sq_value.into(),
                v.in_ms.as_str().into(),
                v.in_as.as_str().into(),
                v.in_ref.as_str().into(),
            ]);
        }
    }
    let envelope = RasterEnvelope { spec, r: raster.r, cells };
    serde_json::to_writer(&mut *out, &envelope).map_err(std::io::Error::other)?;
    Ok(())
}

fn svg_path(poly: &Polyline, spec: &GridSpec, scale: f64) -> String {
    let mut d = String::new();
    for (k, &(x, y)) in poly.iter().enumerate() {
        // imaginary axis points up
        let sx = (x - spec.re_min) * scale;
        let sy = (spec.im_max - y) * scale;
        let cmd = if k == 0 { 'M' } else { 'L' };
        d.push_str(&format!("{cmd}{sx:.3} {sy:.3} "));
    }
    d.trim_end().to_string()
}

/// Stroke-only SVG with one group per region.
pub fn contours_to_svg<W: Write>(contours: &ContourSet, spec: &GridSpec, out: &mut W) -> Result<()> {
    let scale = 100.0;
    let width = (spec.re_max - spec.re_min) * scale;
    let height = (spec.im_max - spec.im_min) * scale;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    )?;
    for (name, color, polys) in [
        ("ms", "#d62728", &contours.ms),
        ("as", "#1f77b4", &contours.r#as),
        ("ref", "#2ca02c", &contours.r#ref),
    ] {
        writeln!(out, r#"<g id="{name}" fill="none" stroke="{color}" stroke-width="1.5">"#)?;
        for poly in polys {
            writeln!(out, r#"<path d="{}"/>"#, svg_path(poly, spec, scale))?;
        }
        writeln!(out, "</g>")?;
    }
    writeln!(out, "</svg>")?;
    Ok(())
}

#[derive(Serialize)]
struct ContourEnvelope<'a> {
    spec: &'a GridSpec,
    r: u32,
    ms: &'a [Polyline],
    r#as: &'a [Polyline],
    r#ref: &'a [Polyline],
}

/// JSON polylines per region.
pub fn contours_to_json<W: Write>(contours: &ContourSet, spec: &GridSpec, r: u32, out: &mut W) -> Result<()> {
    let envelope = ContourEnvelope { spec, r, ms: &contours.ms, r#as: &contours.r#as, r#ref: &contours.r#ref };
    serde_json::to_writer(&mut *out, &envelope).map_err(std::io::Error::other)?;
    Ok(())
}
