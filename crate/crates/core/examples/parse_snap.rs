//! Reads a signed edge list. Pass a path, or run without arguments to
//! parse a small inline sample.
//!
//! cargo run --release --example parse_snap -- soc-sign-epinions.txt

use signed_voter::graph::{parse_snap, snap_stats, BuildOptions};
use signed_voter::structure::decompose;

const SAMPLE: &str = "# FromNodeId\tToNodeId\tSign
7\t3\t1
3\t7\t-1
3\t9\t1
9\t7\t1
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => SAMPLE.to_string(),
    };
    let stats = snap_stats(&text)?;
    println!("{stats:?}");

    let parsed = parse_snap(
        &text,
        BuildOptions {
            repair_dangling: true,
        },
    )?;
    let d = decompose(&parsed.graph);
    println!(
        "{} components, {} sinks, largest sink {} nodes",
        d.components().len(),
        d.sink_count(),
        (0..d.sink_count())
            .map(|i| d.sink_nodes(i).len())
            .max()
            .unwrap_or(0)
    );
    println!(
        "first ids: {:?}",
        &parsed.remap[..parsed.remap.len().min(5)]
    );
    Ok(())
}
