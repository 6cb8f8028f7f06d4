//! Builds the recursive low-distortion curve and prints its marked points.
//!
//!     cargo run --example construct -- 4 3

use distort3::curve::{build_curve, metric_contraction_ratio};
use distort3::{delta3, ConstructionParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>());
    let m = args.next().transpose()?.unwrap_or(4);
    let d = args.next().transpose()?.unwrap_or(3);
    let params = ConstructionParams::new(m, d)?;
    let curve = build_curve(&params)?;
    let seq = curve.to_tame_sequence()?;
    for (i, p) in seq.points().iter().enumerate() {
        println!("{i:>4}  {p}");
    }
    println!("n = {}, largest step {:.6}", seq.n(), seq.max_gap());
    println!("delta3 = {}", delta3(&seq)?.delta3);
    if seq.n() <= 64 {
        println!("chord/arc ratio >= {:.4}", metric_contraction_ratio(&curve, 4)?);
    }
    Ok(())
}
