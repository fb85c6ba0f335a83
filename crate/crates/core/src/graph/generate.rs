//! Synthetic signed digraphs of the families used in the experiments.
//!
//! Every ergodic block is a random directed Hamiltonian cycle over a shuffled
//! node order plus uniformly random chords, `edges_per_node · size` edges in
//! total, no self-loops, unit weights. The cycle guarantees strong
//! connectivity; aperiodicity and the intended balance class are checked
//! after generation and the graph is redrawn (on a fresh RNG stream) when a
//! check fails.
//!
//! Cross edges between the two halves of a balanced block pick their
//! direction uniformly at random, so the split between `A → B` and `B → A`
//! is only balanced in expectation.

use std::collections::HashSet;
use std::ops::Range;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{BuildOptions, SignedDigraph};
use crate::error::{Error, Result};
use crate::structure::{classify_balance, decompose, is_aperiodic, BalanceKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Two ergodic halves joined by negative cross edges.
    Balanced,
    /// `Balanced` with every sign negated.
    AntiBalanced,
    /// The `Balanced` topology with uniformly random signs.
    StrictlyUnbalanced,
    /// Strictly unbalanced `G1` feeding two balanced sinks `G23` and `G45`.
    WeaklyConnected,
    /// `G1`, `G23`, `G45` with no edges between them.
    Disconnected,
    /// A `Balanced` graph next to a `WeaklyConnected` one.
    DisconnectedWithWcc,
    /// Two chains of `m` nodes with exponentially slow mixing.
    SlowMixing,
}

fn default_edges_per_node() -> usize {
    8
}

fn default_max_attempts() -> usize {
    16
}

/// Declarative generator settings, normally read from a `key = value` file:
///
/// ```toml
/// family = "weakly_connected"
/// sizes = [500, 200, 800, 300, 2700]
/// bridge_edges = 3000
/// seed = 7
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub family: Family,
    /// Block sizes: two for the balanced-style families, five
    /// (`G1..G5`) for the weakly connected and disconnected families.
    #[serde(default)]
    pub sizes: Option<Vec<usize>>,
    /// Sizes of the balanced component in `disconnected_with_wcc`.
    #[serde(default)]
    pub ergodic_sizes: Option<Vec<usize>>,
    #[serde(default = "default_edges_per_node")]
    pub edges_per_node: usize,
    /// Edges across the two halves of a balanced block; defaults to
    /// `edges_per_node` times the smaller half.
    #[serde(default)]
    pub cross_edges: Option<usize>,
    /// Edges from `G1` into `G23 ∪ G45`.
    #[serde(default)]
    pub bridge_edges: Option<usize>,
    /// Chain length for `slow_mixing`.
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: usize,
}

pub const DEFAULT_BALANCED_SIZES: [usize; 2] = [3000, 6500];
pub const DEFAULT_FIVE_SIZES: [usize; 5] = [500, 200, 800, 300, 2700];
pub const DEFAULT_BRIDGE_EDGES: usize = 3000;

impl GeneratorConfig {
    pub fn new(family: Family, seed: u64) -> Self {
        GeneratorConfig {
            family,
            sizes: None,
            ergodic_sizes: None,
            edges_per_node: default_edges_per_node(),
            cross_edges: None,
            bridge_edges: None,
            m: None,
            seed,
            max_attempts: default_max_attempts(),
        }
    }

    pub fn slow_mixing(m: usize) -> Self {
        GeneratorConfig {
            m: Some(m),
            ..Self::new(Family::SlowMixing, 0)
        }
    }

    pub fn with_sizes(mut self, sizes: &[usize]) -> Self {
        self.sizes = Some(sizes.to_vec());
        self
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.message().to_string()))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("generator config serializes")
    }

    fn sizes_or<const N: usize>(&self, default: [usize; N]) -> Result<Vec<usize>> {
        let sizes = self.sizes.clone().unwrap_or_else(|| default.to_vec());
        check_sizes(&sizes, N)?;
        Ok(sizes)
    }
}

fn check_sizes(sizes: &[usize], expected: usize) -> Result<()> {
    if sizes.len() != expected {
        return Err(Error::InvalidConfig(format!(
            "expected {expected} sizes, got {}",
            sizes.len()
        )));
    }
    if let Some(s) = sizes.iter().find(|&&s| s < 3) {
        return Err(Error::InvalidConfig(format!(
            "component size {s} is below the minimum of 3"
        )));
    }
    Ok(())
}

pub fn generate(config: &GeneratorConfig) -> Result<SignedDigraph> {
    if config.family == Family::SlowMixing {
        return slow_mixing(
            config
                .m
                .ok_or_else(|| Error::InvalidConfig("slow_mixing needs `m`".to_string()))?,
        );
    }
    if config.edges_per_node == 0 {
        return Err(Error::InvalidConfig(
            "edges_per_node must be positive".into(),
        ));
    }
    if config.max_attempts == 0 {
        return Err(Error::InvalidConfig("max_attempts must be positive".into()));
    }

    let mut last_reason = String::new();
    for attempt in 0..config.max_attempts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(attempt as u64);
        let (edges, n, expect) = draw(config, &mut rng)?;
        let g = SignedDigraph::from_edges(n, &edges, BuildOptions::default())?;
        match verify(&g, &expect) {
            Ok(()) => return Ok(g),
            Err(reason) => last_reason = reason,
        }
    }
    Err(Error::GenerationFailed {
        attempts: config.max_attempts,
        reason: last_reason,
    })
}

/// What the generated graph must look like: the balance class of each sink
/// (in order of smallest node id) and the size of the non-sink set.
struct Expectation {
    sink_kinds: Vec<BalanceKind>,
    non_sink: usize,
}

fn verify(g: &SignedDigraph, expect: &Expectation) -> std::result::Result<(), String> {
    let d = decompose(g);
    if d.sink_count() != expect.sink_kinds.len() {
        return Err(format!(
            "expected {} sinks, found {}",
            expect.sink_kinds.len(),
            d.sink_count()
        ));
    }
    if d.non_sink().len() != expect.non_sink {
        return Err(format!(
            "expected {} non-sink nodes, found {}",
            expect.non_sink,
            d.non_sink().len()
        ));
    }
    for (i, want) in expect.sink_kinds.iter().enumerate() {
        let nodes = d.sink_nodes(i);
        if !is_aperiodic(nodes, g).map_err(|e| e.to_string())? {
            return Err(format!("sink {i} is periodic"));
        }
        let got = classify_balance(nodes, g)
            .map_err(|e| e.to_string())?
            .kind();
        if got != *want {
            return Err(format!("sink {i} is {got:?}, wanted {want:?}"));
        }
    }
    Ok(())
}

struct EdgeSet {
    seen: HashSet<(usize, usize)>,
    edges: Vec<(usize, usize, f64)>,
}

impl EdgeSet {
    fn new() -> Self {
        EdgeSet {
            seen: HashSet::new(),
            edges: Vec::new(),
        }
    }

    fn insert(&mut self, src: usize, dst: usize, w: f64) -> bool {
        if self.seen.insert((src, dst)) {
            self.edges.push((src, dst, w));
            true
        } else {
            false
        }
    }

    /// Adds up to `count` distinct random edges drawn by `pick`. Gives up
    /// after a generous number of collisions so dense requests terminate.
    fn fill(
        &mut self,
        count: usize,
        rng: &mut ChaCha8Rng,
        mut pick: impl FnMut(&mut ChaCha8Rng) -> (usize, usize, f64),
    ) {
        let mut added = 0;
        let mut misses = 0;
        while added < count && misses < 100 * count + 1000 {
            let (s, d, w) = pick(rng);
            if s != d && self.insert(s, d, w) {
                added += 1;
            } else {
                misses += 1;
            }
        }
    }
}

/// Random ergodic block on `range` with the given sign rule.
fn ergodic_block(
    set: &mut EdgeSet,
    rng: &mut ChaCha8Rng,
    range: Range<usize>,
    edges_per_node: usize,
    sign: impl Fn(&mut ChaCha8Rng) -> f64,
) {
    let size = range.len();
    let mut order: Vec<usize> = range.clone().collect();
    order.shuffle(rng);
    for i in 0..size {
        let w = sign(rng);
        set.insert(order[i], order[(i + 1) % size], w);
    }
    let target = (edges_per_node * size).min(size * (size - 1));
    let chords = target.saturating_sub(size);
    set.fill(chords, rng, |r| {
        let s = r.random_range(range.clone());
        let d = r.random_range(range.clone());
        (s, d, sign(r))
    });
}

fn positive(_: &mut ChaCha8Rng) -> f64 {
    1.0
}

fn coin(rng: &mut ChaCha8Rng) -> f64 {
    if rng.random_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

/// Two ergodic halves; edges inside a half follow `inner`, edges across
/// follow `cross`.
fn two_halves(
    set: &mut EdgeSet,
    rng: &mut ChaCha8Rng,
    offset: usize,
    sizes: &[usize],
    config: &GeneratorConfig,
    inner: fn(&mut ChaCha8Rng) -> f64,
    cross: fn(&mut ChaCha8Rng) -> f64,
) -> usize {
    let a = offset..offset + sizes[0];
    let b = a.end..a.end + sizes[1];
    ergodic_block(set, rng, a.clone(), config.edges_per_node, inner);
    ergodic_block(set, rng, b.clone(), config.edges_per_node, inner);
    let count = config
        .cross_edges
        .unwrap_or(config.edges_per_node * sizes[0].min(sizes[1]));
    set.fill(count, rng, |r| {
        let u = r.random_range(a.clone());
        let v = r.random_range(b.clone());
        let w = cross(r);
        if r.random_bool(0.5) {
            (u, v, w)
        } else {
            (v, u, w)
        }
    });
    b.end
}

/// `G1` (strictly unbalanced), `G23` and `G45` (balanced), optionally with
/// bridge edges out of `G1`.
fn five_blocks(
    set: &mut EdgeSet,
    rng: &mut ChaCha8Rng,
    offset: usize,
    sizes: &[usize],
    config: &GeneratorConfig,
    bridged: bool,
) -> usize {
    let g1 = offset..offset + sizes[0];
    ergodic_block(set, rng, g1.clone(), config.edges_per_node, coin);
    let sub = GeneratorConfig {
        cross_edges: None,
        ..config.clone()
    };
    let mid = two_halves(set, rng, g1.end, &sizes[1..3], &sub, positive, negate_unit);
    let end = two_halves(set, rng, mid, &sizes[3..5], &sub, positive, negate_unit);
    if bridged {
        let count = config.bridge_edges.unwrap_or(DEFAULT_BRIDGE_EDGES);
        let sinks = g1.end..end;
        set.fill(count, rng, |r| {
            (
                r.random_range(g1.clone()),
                r.random_range(sinks.clone()),
                coin(r),
            )
        });
    }
    end
}

fn negate_unit(_: &mut ChaCha8Rng) -> f64 {
    -1.0
}

type Draw = (Vec<(usize, usize, f64)>, usize, Expectation);

type SignRule = fn(&mut ChaCha8Rng) -> f64;

fn draw(config: &GeneratorConfig, rng: &mut ChaCha8Rng) -> Result<Draw> {
    use BalanceKind::*;
    let mut set = EdgeSet::new();
    let (n, expect) = match config.family {
        Family::Balanced | Family::AntiBalanced | Family::StrictlyUnbalanced => {
            let sizes = config.sizes_or(DEFAULT_BALANCED_SIZES)?;
            let (inner, cross, kind): (SignRule, SignRule, _) = match config.family {
                Family::Balanced => (positive, negate_unit, Balanced),
                Family::AntiBalanced => (negate_unit, positive, AntiBalanced),
                _ => (coin, coin, StrictlyUnbalanced),
            };
            let n = two_halves(&mut set, rng, 0, &sizes, config, inner, cross);
            (
                n,
                Expectation {
                    sink_kinds: vec![kind],
                    non_sink: 0,
                },
            )
        }
        Family::Disconnected | Family::WeaklyConnected => {
            let sizes = config.sizes_or(DEFAULT_FIVE_SIZES)?;
            let bridged = config.family == Family::WeaklyConnected;
            let n = five_blocks(&mut set, rng, 0, &sizes, config, bridged);
            let expect = if bridged {
                Expectation {
                    sink_kinds: vec![Balanced, Balanced],
                    non_sink: sizes[0],
                }
            } else {
                Expectation {
                    sink_kinds: vec![StrictlyUnbalanced, Balanced, Balanced],
                    non_sink: 0,
                }
            };
            (n, expect)
        }
        Family::DisconnectedWithWcc => {
            let ergodic = config
                .ergodic_sizes
                .clone()
                .unwrap_or_else(|| DEFAULT_BALANCED_SIZES.to_vec());
            check_sizes(&ergodic, 2)?;
            let sizes = config.sizes_or(DEFAULT_FIVE_SIZES)?;
            let balanced = GeneratorConfig {
                cross_edges: None,
                ..config.clone()
            };
            let mid = two_halves(&mut set, rng, 0, &ergodic, &balanced, positive, negate_unit);
            let n = five_blocks(&mut set, rng, mid, &sizes, config, true);
            (
                n,
                Expectation {
                    sink_kinds: vec![Balanced, Balanced, Balanced],
                    non_sink: sizes[0],
                },
            )
        }
        Family::SlowMixing => unreachable!("handled before drawing"),
    };
    Ok((set.edges, n, expect))
}

/// Two chains `L1 → … → Lm` and `R1 → … → Rm` (ids `0..m` and `m..2m`),
/// every `L_i`, `i > 1`, pointing back to `L1` (likewise on the right), and
/// the bridges `Lm → R1`, `Rm → L1`. All edges positive with unit weight.
pub fn slow_mixing(m: usize) -> Result<SignedDigraph> {
    if m < 3 {
        return Err(Error::InvalidConfig(format!(
            "slow_mixing needs m >= 3, got {m}"
        )));
    }
    let mut edges = Vec::with_capacity(4 * m);
    for side in [0, m] {
        for i in 0..m - 1 {
            edges.push((side + i, side + i + 1, 1.0));
        }
        for i in 1..m {
            edges.push((side + i, side, 1.0));
        }
    }
    edges.push((m - 1, m, 1.0));
    edges.push((2 * m - 1, 0, 1.0));
    SignedDigraph::from_edges(2 * m, &edges, BuildOptions::default())
}
