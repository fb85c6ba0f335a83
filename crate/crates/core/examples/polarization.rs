//! On a balanced graph every run ends polarized; the chance that `S` ends
//! white is `π̂_Sᵀ(x0 − ½1) + ½`.
//!
//! cargo run --release --example polarization

use signed_voter::dynamics::LongTermModel;
use signed_voter::graph::{generate, Family, GeneratorConfig};
use signed_voter::simulate::{mc_absorb, VoterSimulator};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = generate(&GeneratorConfig::new(Family::Balanced, 9).with_sizes(&[12, 20]))?;
    let n = g.node_count();
    let model = LongTermModel::build(&g)?;
    let sink = &model.sinks[0];
    let partition = sink.partition.as_ref().expect("balanced");
    let mut mask = vec![false; n];
    for (l, &v) in sink.nodes.iter().enumerate() {
        mask[v] = partition.in_s(l);
    }

    let seeds = [0, 1, 2, 20, 21];
    let mut x0 = vec![0.0; n];
    for &s in &seeds {
        x0[s] = 1.0;
    }
    let predicted = sink.scale(&x0) + 0.5;

    let runs = mc_absorb(
        &VoterSimulator::new(&g),
        &seeds,
        &mask,
        20_000,
        1_000_000,
        1,
    )?;
    println!("polarized: {:.4}", runs.polarized_fraction());
    println!(
        "S white:   {:.4} (predicted {predicted:.4})",
        runs.s_white_fraction()
    );
    println!(
        "mean steps to consensus {:.1}, slowest {}",
        runs.total_steps as f64 / runs.trials as f64,
        runs.max_steps
    );
    Ok(())
}
