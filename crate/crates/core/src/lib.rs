//! Voter-model dynamics on signed directed graphs.
//!
//! Each node repeatedly copies the color of a random out-neighbor, flipping
//! it across negative edges. The crate computes the expected dynamics
//! exactly, derives the long-term state from the graph's condensation and
//! balance structure, simulates the process, and picks seed sets that
//! maximize the expected number of white nodes.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod maximize;
pub mod simulate;
pub mod structure;
