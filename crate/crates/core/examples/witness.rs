//! The square-root lower bound, checked step by step on a planar sequence.
//!
//! Subsampling with step `ceil(delta3)` gives a convex polygon, and a convex
//! polygon with many vertices has a very flat angle somewhere.

use distort3::lower_bound::{line_distance_bound_check, Branch};
use distort3::{check_tame, prop1_verify, Point};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Unit steps turning by 0.1 rad.
    let mut pts = vec![Point::xy(0.0, 0.0)];
    let (mut x, mut y) = (0.0f64, 0.0f64);
    for k in 0..40 {
        let heading = 0.1 * k as f64;
        x += heading.cos();
        y += heading.sin();
        pts.push(Point::xy(x, y));
    }
    let seq = check_tame(pts)?;
    let report = prop1_verify(&seq)?;
    println!("n={} delta3={:.4} step={}", report.n, report.delta3, report.delta);
    match (report.branch, &report.certificate) {
        (Branch::ConvexSubsample, Some(cert)) => {
            println!("convex subsample {:?}", cert.subsample_indices);
            if let Some(w) = &cert.witness {
                println!(
                    "widest angle {:.4} at indices {:?}: triangle distortion {} >= {:.4}",
                    w.angle.angle.radians(),
                    w.indices,
                    w.triple_distortion,
                    w.angle_guarantee
                );
            }
        }
        _ => println!("subsample too short; step >= n/2"),
    }
    println!("implied bound {:.4}, sqrt(n/2pi) = {:.4}", report.implied_bound, report.sqrt_reference);
    println!("line distance bound holds: {}", line_distance_bound_check(&seq, report.delta));
    Ok(())
}
