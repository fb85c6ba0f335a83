//! Monte Carlo voter runs next to the exact expectation.
//!
//! cargo run --release --example monte_carlo

use signed_voter::dynamics::white_totals;
use signed_voter::graph::{generate, ColorDistribution, Family, GeneratorConfig};
use signed_voter::simulate::{mc_run, SimOptions, VoterSimulator};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = GeneratorConfig::new(Family::WeaklyConnected, 5).with_sizes(&[20, 5, 10, 8, 12]);
    let g = generate(&cfg)?;
    let seeds = [0, 3, 7, 30];
    let x0 = ColorDistribution::from_seeds(g.node_count(), &seeds)?;
    let exact = white_totals(&g, &x0, 15)?;
    let stats = mc_run(
        &VoterSimulator::new(&g),
        &seeds,
        15,
        20_000,
        42,
        &SimOptions::default(),
    )?;
    println!("step   exact   simulated  stderr");
    for (k, ((e, m), s)) in exact.iter().zip(&stats.mean).zip(&stats.stderr).enumerate() {
        println!("{k:>4} {e:>7.3} {m:>11.3} {s:>7.3}");
    }
    Ok(())
}
