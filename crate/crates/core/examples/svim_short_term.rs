//! Seeds for the influence at step t and averaged over steps 0..=t.
//!
//! cargo run --example svim_short_term

use signed_voter::graph::{generate, Family, GeneratorConfig};
use signed_voter::maximize::{evaluate_by_propagation, svim_s, Objective, ShortTerm};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = generate(&GeneratorConfig::new(Family::StrictlyUnbalanced, 2).with_sizes(&[100, 200]))?;
    for t in [1, 5, 20] {
        let instant = svim_s(&g, t, 5, ShortTerm::Instant);
        let average = svim_s(&g, t, 5, ShortTerm::Average);
        let check = evaluate_by_propagation(&g, &instant.nodes, Objective::Instant { t })?;
        println!(
            "t = {t:>2}: instant {:?} gain {:.4} (propagated {check:.4}); average {:?} gain {:.4}",
            instant.nodes, instant.value, average.nodes, average.value
        );
    }
    Ok(())
}
