//! Searches for planar paths of small 3-distortion and compares with the
//! grid oracle where it applies.
//!
//!     cargo run --release --example optimize -- 5

use distort3::optimizer::{brute_force_oracle, local_search, SearchConfig, ORACLE_MAX_N};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let top: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(4);
    for n in 2..=top {
        let result = local_search(n, 2, &SearchConfig::for_n(n))?;
        print!("n={n}: {:.6}", result.value);
        if n <= ORACLE_MAX_N {
            print!("  (grid oracle {:.6})", brute_force_oracle(n, 0.01)?.value);
        }
        println!();
        for p in result.best.points() {
            println!("    {p}");
        }
    }
    Ok(())
}
