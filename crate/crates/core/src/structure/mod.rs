//! Condensation, sink detection, periodicity, structural balance and
//! stationary distributions.

mod balance;
mod scc;
mod stationary;

pub use balance::{
    classify_balance, is_aperiodic, period, two_coloring, BalanceClass, BalanceKind, Partition,
};
pub use scc::{decompose, Block, BlockEdgeCounts, Decomposition};
pub use stationary::{
    iteration_cap, stationary, DIRECT_SOLVE_LIMIT, POWER_TOLERANCE, RESIDUAL_TOLERANCE,
};

use serde::Serialize;

use crate::error::Result;
use crate::graph::SignedDigraph;

/// One line of the `classify` report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentReport {
    pub component_id: usize,
    pub size: usize,
    pub sink: bool,
    pub aperiodic: bool,
    pub period: usize,
    pub kind: BalanceKind,
    pub s_size: Option<usize>,
    pub s_bar_size: Option<usize>,
}

/// Classifies every strongly connected component of `g`.
pub fn classify_components(g: &SignedDigraph) -> Result<Vec<ComponentReport>> {
    let d = decompose(g);
    d.components()
        .iter()
        .enumerate()
        .map(|(c, nodes)| {
            let period = period(nodes, g)?;
            let class = classify_balance(nodes, g)?;
            let p = class.partition();
            Ok(ComponentReport {
                component_id: c,
                size: nodes.len(),
                sink: d.is_sink_component(c),
                aperiodic: period == 1,
                period,
                kind: class.kind(),
                s_size: p.map(Partition::size_s),
                s_bar_size: p.map(Partition::size_s_bar),
            })
        })
        .collect()
}
