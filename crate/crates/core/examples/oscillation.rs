//! Seeds that maximize the swing between even and odd steps on an
//! anti-balanced graph.
//!
//! cargo run --example oscillation

use signed_voter::graph::{generate, Family, GeneratorConfig};
use signed_voter::maximize::oscillation_seeds;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = generate(&GeneratorConfig::new(Family::AntiBalanced, 6).with_sizes(&[80, 200]))?;
    for k in [0, 1, 5, 20] {
        let best = oscillation_seeds(&g, k)?;
        println!(
            "k = {k:>2}: amplitude {:.4}, seeds from {}",
            best.amplitude,
            if best.from_s { "S" } else { "S̄" }
        );
    }
    Ok(())
}
