//! Extract region boundaries with marching squares and render them as an
//! SVG, reproducing the disconnected order-4 reference region.
//!
//! Run with: cargo run --release --example contour_svg

use randtaylor::regions::{contours, contours_to_svg, scan, GridSpec};
use randtaylor::{Order, QuadratureConfig};

fn main() {
    // window around the detached lobe of the order-4 reference region
    let spec = GridSpec { re_min: -1.0, re_max: 1.5, im_min: 1.5, im_max: 4.5, nx: 301, ny: 301, band: 1e-9 };
    let raster = scan(Order::new(4).unwrap(), &spec, &QuadratureConfig::default()).unwrap();
    let cs = contours(&raster);
    println!(
        "polylines: {} mean-square, {} asymptotic, {} reference (≥2 ⇒ disconnected)",
        cs.ms.len(),
        cs.r#as.len(),
        cs.r#ref.len()
    );

    let path = std::env::temp_dir().join("randtaylor_contours_r4.svg");
    let mut file = std::fs::File::create(&path).unwrap();
    contours_to_svg(&cs, &spec, &mut file).unwrap();
    println!("wrote {}", path.display());
}
