//! Two chains whose walk needs exponentially many steps to cross.
//!
//! cargo run --release --example slow_mixing

use signed_voter::graph::generate::slow_mixing;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for m in 6..=14 {
        let g = slow_mixing(m)?;
        let mut walk = vec![0.0; 2 * m];
        walk[0] = 1.0;
        let mut t = 0;
        // mass on the right chain after t steps from L1
        while walk[m..].iter().sum::<f64>() < 0.25 {
            walk = g.apply_unsigned_transpose(&walk);
            t += 1;
        }
        println!("m = {m:>2}: {t:>6} steps to put a quarter of the walk on the far chain");
    }
    Ok(())
}
