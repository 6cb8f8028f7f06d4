//! Scaling of the construction's 3-distortion with the number of points.
//!
//!     cargo run --release --example scan -- 3 4,8,16

use distort3::report::scan::scan;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let d: usize = args.first().map(|s| s.parse()).transpose()?.unwrap_or(2);
    let ms: Vec<usize> = match args.get(1) {
        Some(list) => list.split(',').map(str::parse).collect::<Result<_, _>>()?,
        None => vec![4, 8, 16, 32],
    };
    let result = scan(d, &ms, false)?;
    print!("{}", result.to_csv());
    if let Some(fit) = result.fit {
        println!("log-log slope {:.4} (residual {:.3})", fit.slope, fit.residual_norm);
    }
    Ok(())
}
