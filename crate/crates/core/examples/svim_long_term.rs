//! Long-term seeds against the degree baselines.
//!
//! cargo run --release --example svim_long_term

use signed_voter::dynamics::{steady_state_with, LongTermModel};
use signed_voter::graph::{generate, ColorDistribution, Family, GeneratorConfig};
use signed_voter::maximize::{heuristic_seeds, svim_l, HeuristicKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg =
        GeneratorConfig::new(Family::WeaklyConnected, 4).with_sizes(&[250, 100, 400, 150, 600]);
    let g = generate(&cfg)?;
    let n = g.node_count();
    let model = LongTermModel::build(&g)?;
    let k = 50;

    let long_term = |seeds: &[usize]| -> Result<f64, Box<dyn std::error::Error>> {
        let x0 = ColorDistribution::from_seeds(n, seeds)?;
        Ok(steady_state_with(&model, &x0)?.average_total())
    };

    let svim = svim_l(&g, k)?;
    println!(
        "svim_l: {} seeds, long-term white {:.2}",
        svim.len(),
        long_term(&svim.nodes)?
    );
    for kind in [
        HeuristicKind::OutDegree,
        HeuristicKind::PositiveOutDegree,
        HeuristicKind::DegreeDifference,
        HeuristicKind::Random { seed: 1 },
    ] {
        let seeds = heuristic_seeds(&g, k, kind);
        println!("{kind:?}: long-term white {:.2}", long_term(&seeds.nodes)?);
    }
    Ok(())
}
