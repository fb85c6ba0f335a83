//! Monte Carlo realization of the signed voter model.
//!
//! Trial `i` draws from `ChaCha8Rng::seed_from_u64(rng_seed)` on stream `i`,
//! and trials are grouped into fixed blocks whose integer tallies are summed,
//! so results do not depend on thread count or scheduling.

use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SignedDigraph;

const BLOCK: u64 = 256;

enum Choice {
    Single {
        target: u32,
        negative: bool,
    },
    Weighted {
        alias: WeightedAliasIndex<f64>,
        targets: Vec<u32>,
        negative: Vec<bool>,
    },
}

/// Per-node neighbor samplers for one graph.
pub struct VoterSimulator {
    choices: Vec<Choice>,
}

impl VoterSimulator {
    pub fn new(g: &SignedDigraph) -> Self {
        let choices = (0..g.node_count())
            .map(|i| {
                let edges = g.out_edges(i);
                if let [e] = edges {
                    return Choice::Single {
                        target: e.target as u32,
                        negative: e.sign.is_negative(),
                    };
                }
                Choice::Weighted {
                    alias: WeightedAliasIndex::new(edges.iter().map(|e| e.weight).collect())
                        .expect("validated graph has positive finite weights"),
                    targets: edges.iter().map(|e| e.target as u32).collect(),
                    negative: edges.iter().map(|e| e.sign.is_negative()).collect(),
                }
            })
            .collect();
        VoterSimulator { choices }
    }

    pub fn node_count(&self) -> usize {
        self.choices.len()
    }

    /// One synchronous update: every node samples an out-neighbor by weight
    /// and copies its pre-update color, negated across a negative edge.
    /// `true` is white.
    pub fn step_into(&self, colors: &[bool], out: &mut [bool], rng: &mut ChaCha8Rng) {
        for (o, choice) in out.iter_mut().zip(&self.choices) {
            *o = match choice {
                Choice::Single { target, negative } => colors[*target as usize] != *negative,
                Choice::Weighted {
                    alias,
                    targets,
                    negative,
                } => {
                    let k = alias.sample(rng);
                    colors[targets[k] as usize] != negative[k]
                }
            };
        }
    }
}

pub fn mc_step(sim: &VoterSimulator, colors: &[bool], rng: &mut ChaCha8Rng) -> Vec<bool> {
    let mut out = vec![false; colors.len()];
    sim.step_into(colors, &mut out, rng);
    out
}

/// The generator for trial `trial` of a run seeded with `rng_seed`.
pub fn trial_rng(rng_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rng.set_stream(trial);
    rng
}

#[derive(Clone, Debug, Default)]
pub struct SimOptions {
    /// Record how often each node is white at each step.
    pub track_nodes: bool,
    /// Node mask of `S` for a balanced graph; enables polarization counts.
    pub partition: Option<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimStats {
    pub nodes: usize,
    pub steps: usize,
    pub trials: u64,
    pub rng_seed: u64,
    /// Mean white count at steps `0..=steps`.
    pub mean: Vec<f64>,
    /// Standard error of `mean`.
    pub stderr: Vec<f64>,
    /// `node_frequency[k][i]`: fraction of trials with node `i` white at
    /// step `k`.
    pub node_frequency: Option<Vec<Vec<f64>>>,
    /// Trials polarized with `S` white at each step.
    pub polarized_s_white: Option<Vec<u64>>,
    /// Trials polarized with `S̄` white at each step.
    pub polarized_s_bar_white: Option<Vec<u64>>,
}

impl SimStats {
    /// Trials ending in either polarized state.
    pub fn polarized_at_end(&self) -> Option<u64> {
        let s = self.polarized_s_white.as_ref()?;
        let sb = self.polarized_s_bar_white.as_ref()?;
        Some(s[self.steps] + sb[self.steps])
    }
}

#[derive(Clone)]
struct Tally {
    sum: Vec<u64>,
    sum_sq: Vec<u128>,
    nodes: Option<Vec<Vec<u64>>>,
    pol_s: Option<Vec<u64>>,
    pol_sb: Option<Vec<u64>>,
}

impl Tally {
    fn new(n: usize, t: usize, options: &SimOptions) -> Self {
        let has_p = options.partition.is_some();
        Tally {
            sum: vec![0; t + 1],
            sum_sq: vec![0; t + 1],
            nodes: options.track_nodes.then(|| vec![vec![0; n]; t + 1]),
            pol_s: has_p.then(|| vec![0; t + 1]),
            pol_sb: has_p.then(|| vec![0; t + 1]),
        }
    }

    fn record(&mut self, k: usize, colors: &[bool], partition: Option<&[bool]>) {
        let w = colors.iter().filter(|&&c| c).count() as u64;
        self.sum[k] += w;
        self.sum_sq[k] += (w as u128) * (w as u128);
        if let Some(nodes) = &mut self.nodes {
            for (acc, &c) in nodes[k].iter_mut().zip(colors) {
                *acc += c as u64;
            }
        }
        if let Some(mask) = partition {
            match polarization(colors, mask) {
                Some(true) => self.pol_s.as_mut().expect("allocated with partition")[k] += 1,
                Some(false) => self.pol_sb.as_mut().expect("allocated with partition")[k] += 1,
                None => {}
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        add_into(&mut self.sum, &other.sum);
        for (a, b) in self.sum_sq.iter_mut().zip(&other.sum_sq) {
            *a += b;
        }
        if let (Some(a), Some(b)) = (&mut self.nodes, &other.nodes) {
            for (ra, rb) in a.iter_mut().zip(b) {
                add_into(ra, rb);
            }
        }
        if let (Some(a), Some(b)) = (&mut self.pol_s, &other.pol_s) {
            add_into(a, b);
        }
        if let (Some(a), Some(b)) = (&mut self.pol_sb, &other.pol_sb) {
            add_into(a, b);
        }
        self
    }
}

fn add_into(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

/// `Some(true)` if exactly `S` is white, `Some(false)` if exactly `S̄` is.
fn polarization(colors: &[bool], mask: &[bool]) -> Option<bool> {
    if colors == mask {
        Some(true)
    } else if colors.iter().zip(mask).all(|(c, m)| c != m) {
        Some(false)
    } else {
        None
    }
}

fn initial_colors(n: usize, seeds: &[usize]) -> Result<Vec<bool>> {
    let mut colors = vec![false; n];
    for &s in seeds {
        if s >= n {
            return Err(Error::NodeOutOfRange { node: s, n });
        }
        colors[s] = true;
    }
    Ok(colors)
}

fn check_partition(n: usize, options: &SimOptions) -> Result<()> {
    match &options.partition {
        Some(mask) if mask.len() != n => Err(Error::LengthMismatch {
            expected: n,
            got: mask.len(),
        }),
        _ => Ok(()),
    }
}

/// Runs `trials` trajectories of `t` steps from white `seeds`, black
/// elsewhere.
pub fn mc_run(
    sim: &VoterSimulator,
    seeds: &[usize],
    t: usize,
    trials: u64,
    rng_seed: u64,
    options: &SimOptions,
) -> Result<SimStats> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    let n = sim.node_count();
    check_partition(n, options)?;
    let start = initial_colors(n, seeds)?;
    let mask = options.partition.as_deref();

    let blocks = trials.div_ceil(BLOCK);
    let tally = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut tally = Tally::new(n, t, options);
            let mut colors = start.clone();
            let mut next = vec![false; n];
            for trial in b * BLOCK..((b + 1) * BLOCK).min(trials) {
                let mut rng = trial_rng(rng_seed, trial);
                colors.copy_from_slice(&start);
                tally.record(0, &colors, mask);
                for k in 1..=t {
                    sim.step_into(&colors, &mut next, &mut rng);
                    std::mem::swap(&mut colors, &mut next);
                    tally.record(k, &colors, mask);
                }
            }
            tally
        })
        .collect::<Vec<_>>()
        .into_iter()
        .reduce(Tally::merge)
        .expect("at least one block");

    let tf = trials as f64;
    let mean: Vec<f64> = tally.sum.iter().map(|&s| s as f64 / tf).collect();
    let stderr = tally
        .sum
        .iter()
        .zip(&tally.sum_sq)
        .map(|(&s, &sq)| {
            if trials < 2 {
                return 0.0;
            }
            // exact integer numerator: trials·Σw² − (Σw)²
            let num = (trials as u128) * sq - (s as u128) * (s as u128);
            let var = num as f64 / (tf * (tf - 1.0));
            (var / tf).sqrt()
        })
        .collect();
    Ok(SimStats {
        nodes: n,
        steps: t,
        trials,
        rng_seed,
        mean,
        stderr,
        node_frequency: tally.nodes.map(|rows| {
            rows.into_iter()
                .map(|r| r.into_iter().map(|c| c as f64 / tf).collect())
                .collect()
        }),
        polarized_s_white: tally.pol_s,
        polarized_s_bar_white: tally.pol_sb,
    })
}

/// Outcome of running trials until they reach a polarized state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Absorption {
    pub trials: u64,
    pub s_white: u64,
    pub s_bar_white: u64,
    /// Trials still mixed after `cap` steps.
    pub unabsorbed: u64,
    /// Steps to absorption summed over absorbed trials.
    pub total_steps: u64,
    pub max_steps: u64,
}

impl Absorption {
    pub fn polarized_fraction(&self) -> f64 {
        (self.s_white + self.s_bar_white) as f64 / self.trials as f64
    }

    /// Empirical probability of ending with `S` white.
    pub fn s_white_fraction(&self) -> f64 {
        self.s_white as f64 / self.trials as f64
    }
}

/// Runs each trial until its colors equal `partition` or its complement,
/// or until `cap` steps have passed.
pub fn mc_absorb(
    sim: &VoterSimulator,
    seeds: &[usize],
    partition: &[bool],
    trials: u64,
    cap: u64,
    rng_seed: u64,
) -> Result<Absorption> {
    let n = sim.node_count();
    if partition.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: partition.len(),
        });
    }
    let start = initial_colors(n, seeds)?;
    let blocks = trials.div_ceil(BLOCK);
    let per_block: Vec<Absorption> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut out = Absorption {
                trials: 0,
                s_white: 0,
                s_bar_white: 0,
                unabsorbed: 0,
                total_steps: 0,
                max_steps: 0,
            };
            let mut colors = start.clone();
            let mut next = vec![false; n];
            for trial in b * BLOCK..((b + 1) * BLOCK).min(trials) {
                let mut rng = trial_rng(rng_seed, trial);
                colors.copy_from_slice(&start);
                out.trials += 1;
                let mut steps = 0;
                let state = loop {
                    if let Some(side) = polarization(&colors, partition) {
                        break Some(side);
                    }
                    if steps == cap {
                        break None;
                    }
                    sim.step_into(&colors, &mut next, &mut rng);
                    std::mem::swap(&mut colors, &mut next);
                    steps += 1;
                };
                match state {
                    Some(true) => out.s_white += 1,
                    Some(false) => out.s_bar_white += 1,
                    None => out.unabsorbed += 1,
                }
                if state.is_some() {
                    out.total_steps += steps;
                    out.max_steps = out.max_steps.max(steps);
                }
            }
            out
        })
        .collect();
    Ok(per_block
        .into_iter()
        .reduce(|a, b| Absorption {
            trials: a.trials + b.trials,
            s_white: a.s_white + b.s_white,
            s_bar_white: a.s_bar_white + b.s_bar_white,
            unabsorbed: a.unabsorbed + b.unabsorbed,
            total_steps: a.total_steps + b.total_steps,
            max_steps: a.max_steps.max(b.max_steps),
        })
        .unwrap_or(Absorption {
            trials: 0,
            s_white: 0,
            s_bar_white: 0,
            unabsorbed: 0,
            total_steps: 0,
            max_steps: 0,
        }))
}
