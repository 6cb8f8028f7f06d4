//! Exact 3-distortion of a few small paths, and of a point file if given.
//!
//!     cargo run --example delta3 [-- points.csv]

use distort3::report::io::read_points;
use distort3::{check_tame, delta3, Point};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = 3f64.sqrt() / 2.0;
    let paths = [
        ("right angle", vec![[0., 0.], [1., 0.], [1., 1.]]),
        ("U-shape", vec![[0., 0.], [1., 0.], [1.5, h], [1., 2. * h]]),
        ("square", vec![[0., 0.], [1., 0.], [1., 1.], [0., 1.]]),
        ("straight", vec![[0., 0.], [1., 0.], [2., 0.]]),
    ];
    for (name, coords) in paths {
        let seq = check_tame(coords.iter().map(|c| Point::xy(c[0], c[1])).collect())?;
        let report = delta3(&seq)?;
        let w = report.worst;
        println!("{name:>12}: delta3={} at ({},{},{})", report.delta3, w.i, w.j, w.k);
    }
    if let Some(path) = std::env::args().nth(1) {
        let seq = check_tame(read_points(path.as_ref())?)?;
        let report = delta3(&seq)?;
        println!("{path}: delta3={} over {} triples", report.delta3, report.triples_evaluated);
    }
    Ok(())
}
