//! Long-term behavior on the three kinds of ergodic graph.
//!
//! cargo run --example steady_state

use signed_voter::dynamics::{oscillation_amplitude, run_to_horizon, steady_state};
use signed_voter::dynamics::{SETTLE_CAP, SETTLE_TOLERANCE};
use signed_voter::graph::{generate, ColorDistribution, Family, GeneratorConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for family in [
        Family::Balanced,
        Family::AntiBalanced,
        Family::StrictlyUnbalanced,
    ] {
        let g = generate(&GeneratorConfig::new(family, 3).with_sizes(&[200, 450]))?;
        let x0 = ColorDistribution::from_seeds(g.node_count(), &[0, 1, 2, 3, 4])?;
        let steady = steady_state(&g, &x0)?;
        let settled = run_to_horizon(&g, &x0, SETTLE_TOLERANCE, SETTLE_CAP)?;
        print!(
            "{family:?}: {:?}, even total {:.4}, odd total {:.4}, settled after {} steps",
            steady.kind,
            steady.even.total(),
            steady.odd.total(),
            settled.steps
        );
        match oscillation_amplitude(&steady) {
            Ok(a) => println!(", amplitude {a:.4}"),
            Err(_) => println!(),
        }
    }
    Ok(())
}
