//! Unit-spaced points on one fixed arc: the distortion grows linearly.

use distort3::report::scan::{baseline, consecutive_arc_distortion, BASELINE_OPENING};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ns = [8, 16, 32, 64, 128];
    let result = baseline(&ns, BASELINE_OPENING, false)?;
    for r in &result.records {
        println!(
            "n={:>4}  delta3={:<22} consecutive triple {:.6}",
            r.n,
            r.delta3.to_string(),
            consecutive_arc_distortion(r.n, BASELINE_OPENING)
        );
    }
    println!("slope {:.4}", result.fit.expect("several sizes").slope);
    Ok(())
}
