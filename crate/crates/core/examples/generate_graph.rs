//! Generates each synthetic family at a small size and prints its shape.
//!
//! cargo run --example generate_graph

use signed_voter::graph::{generate, Family, GeneratorConfig};
use signed_voter::structure::decompose;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let families = [
        (Family::Balanced, vec![300, 650]),
        (Family::AntiBalanced, vec![300, 650]),
        (Family::StrictlyUnbalanced, vec![300, 650]),
        (Family::WeaklyConnected, vec![50, 20, 80, 30, 270]),
        (Family::Disconnected, vec![50, 20, 80, 30, 270]),
    ];
    for (family, sizes) in families {
        let cfg = GeneratorConfig::new(family, 7).with_sizes(&sizes);
        let g = generate(&cfg)?;
        let d = decompose(&g);
        println!(
            "{family:?}: {} nodes, {} edges ({} negative), {} sinks, |X| = {}",
            g.node_count(),
            g.edge_count(),
            g.negative_edge_count(),
            d.sink_count(),
            d.non_sink().len()
        );
    }

    let cfg = GeneratorConfig::new(Family::WeaklyConnected, 7);
    println!(
        "\ndefault weakly connected config:\n{}",
        cfg.to_toml_string()
    );
    Ok(())
}
