//! Writes SVG figures of the planar curve and of the spatial one seen from
//! the side.

use distort3::curve::{build_curve, sample_polyline};
use distort3::report::svg::{render_svg, Plane};
use distort3::ConstructionParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir();
    for (m, d, plane) in [(6, 2, Plane::Xy), (4, 3, Plane::Xz)] {
        let curve = build_curve(&ConstructionParams::new(m, d)?)?;
        let line = sample_polyline(&curve, 16)?;
        let svg = render_svg(&[line], &curve.marked_points(), plane)?;
        let path = dir.join(format!("curve_m{m}_d{d}.svg"));
        std::fs::write(&path, svg)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
