//! Rasterize the three stability regions over a window and export the
//! classified grid as CSV.
//!
//! Run with: cargo run --release --example region_raster

use randtaylor::regions::{raster_to_csv, scan, GridSpec};
use randtaylor::{Membership, Order, QuadratureConfig};

fn main() {
    let spec = GridSpec { re_min: -3.0, re_max: 1.0, im_min: -3.0, im_max: 3.0, nx: 201, ny: 201, band: 1e-9 };
    let raster = scan(Order::new(0).unwrap(), &spec, &QuadratureConfig::default()).unwrap();

    let ms = raster.verdicts.iter().filter(|v| v.in_ms == Membership::In).count();
    let asym = raster.verdicts.iter().filter(|v| v.in_as == Membership::In).count();
    println!("{}×{} grid: {ms} mean-square stable nodes, {asym} asymptotically stable", spec.nx, spec.ny);
    println!("cell-count areas: MS {:.3}, AS {:.3}", raster.area(|v| v.in_ms), raster.area(|v| v.in_as));

    let path = std::env::temp_dir().join("randtaylor_region_r0.csv");
    let mut file = std::fs::File::create(&path).unwrap();
    raster_to_csv(&raster, &mut file).unwrap();
    println!("wrote {}", path.display());
}
