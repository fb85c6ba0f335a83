//! Influence contributions and seed selection.
//!
//! Expected influence is linear in the seed indicator, so every objective
//! here reduces to a contribution vector `c` with `f(e_W) − f(0) = Σ_{i∈W} c(i)`
//! and the optimal seed set is the top of `c` restricted to positive entries.

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    oscillation_amplitude, run_to_horizon, steady_state_with, white_totals, LongTermModel,
    SETTLE_CAP, SETTLE_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::graph::{ColorDistribution, SignedDigraph};
use crate::structure::BalanceKind;

/// Largest graph [`brute_force_opt`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;
/// Objective values closer than this count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeuristicKind {
    /// `d⁺ + d⁻`.
    OutDegree,
    /// `d⁺`.
    PositiveOutDegree,
    /// `d⁺ − d⁻`.
    DegreeDifference,
    Random {
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "objective", rename_all = "snake_case")]
pub enum Objective {
    /// Expected white count at step `t`.
    Instant {
        t: usize,
    },
    /// Mean expected white count over steps `0..=t`.
    Average {
        t: usize,
    },
    /// Cesàro limit of the expected white count.
    LongTerm,
    /// Oscillation amplitude `|f_o − f_e| / 2`.
    Oscillation,
    Heuristic {
        kind: HeuristicKind,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContributionVector {
    pub c: Vec<f64>,
    pub objective: Objective,
}

impl ContributionVector {
    /// `n⁺(c)`.
    pub fn positive_count(&self) -> usize {
        self.c.iter().filter(|&&v| v > 0.0).count()
    }

    pub fn value_of(&self, seeds: &[usize]) -> f64 {
        seeds.iter().map(|&i| self.c[i]).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeedSet {
    /// Seed ids, ascending.
    pub nodes: Vec<usize>,
    /// The same ids in selection order (best first).
    pub ranking: Vec<usize>,
    pub value: f64,
    pub objective: Objective,
}

impl SeedSet {
    fn from_ranking(ranking: Vec<usize>, value: f64, objective: Objective) -> Self {
        let mut nodes = ranking.clone();
        nodes.sort_unstable();
        SeedSet {
            nodes,
            ranking,
            value,
            objective,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `c_tᵀ = 1ᵀPᵗ`.
pub fn contribution_instant(g: &SignedDigraph, t: usize) -> ContributionVector {
    let mut c = vec![1.0; g.node_count()];
    let mut buf = vec![0.0; g.node_count()];
    for _ in 0..t {
        g.apply_p_transpose_into(&c, &mut buf);
        std::mem::swap(&mut c, &mut buf);
    }
    ContributionVector {
        c,
        objective: Objective::Instant { t },
    }
}

/// `c̄_t = (c_0 + … + c_t) / (t + 1)` with `c_0 = 1`.
pub fn contribution_average(g: &SignedDigraph, t: usize) -> ContributionVector {
    let n = g.node_count();
    let mut c = vec![1.0; n];
    let mut sum = c.clone();
    let mut buf = vec![0.0; n];
    for _ in 0..t {
        g.apply_p_transpose_into(&c, &mut buf);
        std::mem::swap(&mut c, &mut buf);
        for (s, v) in sum.iter_mut().zip(&c) {
            *s += v;
        }
    }
    let scale = 1.0 / (t + 1) as f64;
    ContributionVector {
        c: sum.into_iter().map(|s| s * scale).collect(),
        objective: Objective::Average { t },
    }
}

pub fn contribution_longterm(g: &SignedDigraph) -> Result<ContributionVector> {
    Ok(contribution_longterm_with(&LongTermModel::build(g)?))
}

/// Long-term contributions: `(1ᵀu_b + |S_Z| − |S̄_Z|)·π̂_{Z,S_Z}` on each
/// balanced sink, zero everywhere else.
pub fn contribution_longterm_with(model: &LongTermModel) -> ContributionVector {
    let mut c = vec![0.0; model.decomposition.node_count()];
    for sink in &model.sinks {
        if sink.kind != BalanceKind::Balanced {
            continue;
        }
        let p = sink
            .partition
            .as_ref()
            .expect("balanced sinks carry a partition");
        let coupled: f64 = sink.coupling.as_ref().map_or(0.0, |u| u.iter().sum());
        let factor = coupled + p.size_s() as f64 - p.size_s_bar() as f64;
        for (l, &v) in sink.nodes.iter().enumerate() {
            c[v] = factor * p.sign(l) * sink.pi[l];
        }
    }
    ContributionVector {
        c,
        objective: Objective::LongTerm,
    }
}

/// Top `min{k, n⁺(c)}` entries of `c`, by value then id.
pub fn select_top(c: &ContributionVector, k: usize) -> SeedSet {
    let ranking: Vec<usize> = (0..c.c.len())
        .filter(|&i| c.c[i] > 0.0)
        .sorted_by(|&a, &b| c.c[b].total_cmp(&c.c[a]).then(a.cmp(&b)))
        .take(k)
        .collect();
    let value = c.value_of(&ranking);
    SeedSet::from_ranking(ranking, value, c.objective)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShortTerm {
    Instant,
    Average,
}

/// Optimal seeds for the step-`t` or average-over-`t` objective.
pub fn svim_s(g: &SignedDigraph, t: usize, k: usize, mode: ShortTerm) -> SeedSet {
    let c = match mode {
        ShortTerm::Instant => contribution_instant(g, t),
        ShortTerm::Average => contribution_average(g, t),
    };
    select_top(&c, k)
}

/// Optimal seeds for the long-term objective.
pub fn svim_l(g: &SignedDigraph, k: usize) -> Result<SeedSet> {
    Ok(select_top(&contribution_longterm(g)?, k))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OscillationSeeds {
    pub seeds: SeedSet,
    pub amplitude: f64,
    /// `true` when the seeds come from `S`, `false` when from `S̄`.
    pub from_s: bool,
}

/// Seeds maximizing the oscillation amplitude on the graph's single
/// anti-balanced sink: the better of the top-`π` nodes of `S` and of `S̄`.
pub fn oscillation_seeds(g: &SignedDigraph, k: usize) -> Result<OscillationSeeds> {
    let model = LongTermModel::build(g)?;
    let anti: Vec<_> = model
        .sinks
        .iter()
        .filter(|s| s.kind == BalanceKind::AntiBalanced)
        .collect();
    let [sink] = anti.as_slice() else {
        return Err(Error::WrongKind {
            expected: "exactly one anti-balanced sink",
            found: format!("{} anti-balanced sinks", anti.len()),
        });
    };
    let p = sink
        .partition
        .as_ref()
        .expect("anti-balanced sinks carry a partition");

    let top_of = |side: bool| -> Vec<usize> {
        (0..sink.nodes.len())
            .filter(|&l| p.in_s(l) == side)
            .sorted_by(|&a, &b| {
                sink.pi[b]
                    .total_cmp(&sink.pi[a])
                    .then(sink.nodes[a].cmp(&sink.nodes[b]))
            })
            .take(k)
            .collect()
    };
    let n = g.node_count();
    let strength = |local: &[usize]| -> f64 {
        let mut x0 = vec![0.0; n];
        for &l in local {
            x0[sink.nodes[l]] = 1.0;
        }
        sink.scale(&x0).abs()
    };
    let w1 = top_of(true);
    let w2 = top_of(false);
    let from_s = strength(&w1) >= strength(&w2);
    let chosen = if from_s { w1 } else { w2 };
    let ranking: Vec<usize> = chosen.iter().map(|&l| sink.nodes[l]).collect();

    let x0 = ColorDistribution::from_seeds(n, &ranking)?;
    let amplitude = oscillation_amplitude(&steady_state_with(&model, &x0)?)?;
    Ok(OscillationSeeds {
        seeds: SeedSet::from_ranking(ranking, amplitude, Objective::Oscillation),
        amplitude,
        from_s,
    })
}

pub fn heuristic_scores(g: &SignedDigraph, kind: HeuristicKind) -> Option<Vec<f64>> {
    let n = g.node_count();
    let score: fn(&SignedDigraph, usize) -> f64 = match kind {
        HeuristicKind::OutDegree => |g, i| g.total_out_weight(i),
        HeuristicKind::PositiveOutDegree => |g, i| g.positive_out_weight(i),
        HeuristicKind::DegreeDifference => {
            |g, i| g.positive_out_weight(i) - g.negative_out_weight(i)
        }
        HeuristicKind::Random { .. } => return None,
    };
    Some((0..n).map(|i| score(g, i)).collect())
}

/// Baseline seeds: top `min{k, n}` by the named degree score, or a uniform
/// random subset. Contribution signs are ignored.
pub fn heuristic_seeds(g: &SignedDigraph, k: usize, kind: HeuristicKind) -> SeedSet {
    let n = g.node_count();
    let k = k.min(n);
    let objective = Objective::Heuristic { kind };
    match heuristic_scores(g, kind) {
        Some(scores) => {
            let ranking: Vec<usize> = (0..n)
                .sorted_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)))
                .take(k)
                .collect();
            let value = ranking.iter().map(|&i| scores[i]).sum();
            SeedSet::from_ranking(ranking, value, objective)
        }
        None => {
            let HeuristicKind::Random { seed } = kind else {
                unreachable!("only the random baseline has no score")
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ranking = rand::seq::index::sample(&mut rng, n, k).into_vec();
            SeedSet::from_ranking(ranking, 0.0, objective)
        }
    }
}

/// `f(e_W) − f(0)` for an objective, computed by propagating both states.
pub fn evaluate_by_propagation(
    g: &SignedDigraph,
    seeds: &[usize],
    objective: Objective,
) -> Result<f64> {
    let n = g.node_count();
    let x0 = ColorDistribution::from_seeds(n, seeds)?;
    let zero = ColorDistribution::zeros(n);
    match objective {
        Objective::Instant { t } => {
            let a = white_totals(g, &x0, t)?;
            let b = white_totals(g, &zero, t)?;
            Ok(a[t] - b[t])
        }
        Objective::Average { t } => {
            let a = white_totals(g, &x0, t)?;
            let b = white_totals(g, &zero, t)?;
            Ok(a.iter().zip(&b).map(|(x, y)| x - y).sum::<f64>() / (t + 1) as f64)
        }
        Objective::LongTerm => {
            let a = run_to_horizon(g, &x0, SETTLE_TOLERANCE, SETTLE_CAP)?;
            let b = run_to_horizon(g, &zero, SETTLE_TOLERANCE, SETTLE_CAP)?;
            Ok(a.average_total() - b.average_total())
        }
        Objective::Oscillation => {
            let a = run_to_horizon(g, &x0, SETTLE_TOLERANCE, SETTLE_CAP)?;
            let even: f64 = a.even.iter().sum();
            let odd: f64 = a.odd.iter().sum();
            Ok((odd - even).abs() / 2.0)
        }
        Objective::Heuristic { .. } => Err(Error::WrongKind {
            expected: "an influence objective",
            found: "heuristic".to_string(),
        }),
    }
}

/// Exhaustive search over every seed set of size at most `k`, each scored
/// by [`evaluate_by_propagation`]. Ties (within [`TIE_TOLERANCE`]) go to the
/// set enumerated first: smaller sets, then lexicographic order.
pub fn brute_force_opt(g: &SignedDigraph, objective: Objective, k: usize) -> Result<SeedSet> {
    let n = g.node_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let candidates: Vec<Vec<usize>> = (0..=k.min(n))
        .flat_map(|size| (0..n).combinations(size))
        .collect();
    let values: Vec<f64> = candidates
        .par_iter()
        .map(|w| evaluate_by_propagation(g, w, objective))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] + TIE_TOLERANCE {
            best = i;
        }
    }
    let nodes = candidates[best].clone();
    Ok(SeedSet {
        ranking: nodes.clone(),
        nodes,
        value: values[best],
        objective,
    })
}
