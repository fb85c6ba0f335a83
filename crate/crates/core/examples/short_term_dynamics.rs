//! Expected white count over the first steps, from a few seeds.
//!
//! cargo run --example short_term_dynamics

use signed_voter::dynamics::white_totals;
use signed_voter::graph::{ColorDistribution, SignedDigraph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a trust/distrust triangle with a follower
    let g = SignedDigraph::from_edge_list(&[
        (0, 1, 1.0),
        (1, 2, -1.0),
        (2, 0, 1.0),
        (0, 0, 1.0),
        (3, 0, 2.0),
        (3, 2, -1.0),
    ])?;
    let x0 = ColorDistribution::from_seeds(4, &[0])?;
    for (t, total) in white_totals(&g, &x0, 10)?.iter().enumerate() {
        println!("t = {t:>2}  E[white] = {total:.4}");
    }
    Ok(())
}
