//! Condensation and balance class of every component.
//!
//! cargo run --example classify_components

use signed_voter::graph::{generate, Family, GeneratorConfig};
use signed_voter::structure::classify_components;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = GeneratorConfig::new(Family::WeaklyConnected, 1).with_sizes(&[40, 10, 20, 15, 25]);
    let g = generate(&cfg)?;
    for c in classify_components(&g)? {
        println!(
            "component {:>2}: size {:>3}, sink {:5}, period {}, {:?}, |S| = {:?}, |S̄| = {:?}",
            c.component_id, c.size, c.sink, c.period, c.kind, c.s_size, c.s_bar_size
        );
    }
    Ok(())
}
