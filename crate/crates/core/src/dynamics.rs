//! Exact expected dynamics: the recurrence `x_t = P x_{t-1} + g⁻` and the
//! closed-form limits per sink class.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ColorDistribution, SignedDigraph};
use crate::structure::{
    classify_balance, decompose, period, stationary, BalanceClass, BalanceKind, Block,
    Decomposition, Partition, DIRECT_SOLVE_LIMIT,
};

/// Largest out-of-range excursion a step may produce before clamping.
pub const CLAMP_SLACK: f64 = 1e-12;
/// Same-parity change `‖x_{t+2} − x_t‖∞` at which a run counts as settled.
pub const SETTLE_TOLERANCE: f64 = 1e-9;
pub const SETTLE_CAP: usize = 1_000_000;
/// Per-entry change at which the coupling iteration stops.
pub const COUPLING_TOLERANCE: f64 = 1e-12;

fn step_into(g: &SignedDigraph, ground: &[f64], x: &[f64], out: &mut [f64]) {
    g.apply_p_into(x, out);
    for (i, (o, gi)) in out.iter_mut().zip(ground).enumerate() {
        let v = *o + gi;
        assert!(
            (-CLAMP_SLACK..=1.0 + CLAMP_SLACK).contains(&v),
            "step left [0, 1] at node {i}: {v}"
        );
        *o = v.clamp(0.0, 1.0);
    }
}

/// One synchronous step of the expected dynamics.
///
/// # Panics
/// If an entry leaves `[0, 1]` by more than [`CLAMP_SLACK`], which the
/// recurrence rules out for a valid graph.
pub fn step(g: &SignedDigraph, x: &ColorDistribution) -> ColorDistribution {
    let mut out = vec![0.0; g.node_count()];
    step_into(g, &g.ground_vector(), x.as_slice(), &mut out);
    ColorDistribution::from_vec_unchecked(out)
}

/// Streams `x_0, x_1, …` without keeping the history.
pub struct Propagator<'g> {
    g: &'g SignedDigraph,
    ground: Vec<f64>,
    x: Vec<f64>,
    buf: Vec<f64>,
    t: usize,
}

impl<'g> Propagator<'g> {
    pub fn new(g: &'g SignedDigraph, x0: &ColorDistribution) -> Result<Self> {
        if x0.len() != g.node_count() {
            return Err(Error::LengthMismatch {
                expected: g.node_count(),
                got: x0.len(),
            });
        }
        Ok(Propagator {
            g,
            ground: g.ground_vector(),
            x: x0.as_slice().to_vec(),
            buf: vec![0.0; g.node_count()],
            t: 0,
        })
    }

    pub fn step_index(&self) -> usize {
        self.t
    }

    pub fn current(&self) -> &[f64] {
        &self.x
    }

    pub fn total(&self) -> f64 {
        self.x.iter().sum()
    }

    pub fn advance(&mut self) -> &[f64] {
        step_into(self.g, &self.ground, &self.x, &mut self.buf);
        std::mem::swap(&mut self.x, &mut self.buf);
        self.t += 1;
        &self.x
    }
}

/// `[x_0, …, x_t]`.
pub fn propagate(
    g: &SignedDigraph,
    x0: &ColorDistribution,
    t: usize,
) -> Result<Vec<ColorDistribution>> {
    let mut p = Propagator::new(g, x0)?;
    let mut out = Vec::with_capacity(t + 1);
    out.push(x0.clone());
    for _ in 0..t {
        out.push(ColorDistribution::from_vec_unchecked(p.advance().to_vec()));
    }
    Ok(out)
}

/// Expected white counts `1ᵀx_k` for `k = 0..=t`.
pub fn white_totals(g: &SignedDigraph, x0: &ColorDistribution, t: usize) -> Result<Vec<f64>> {
    let mut p = Propagator::new(g, x0)?;
    let mut out = Vec::with_capacity(t + 1);
    out.push(p.total());
    for _ in 0..t {
        p.advance();
        out.push(p.total());
    }
    Ok(out)
}

/// The last two states of a run that stopped changing between steps of
/// equal parity.
#[derive(Clone, Debug)]
pub struct Settled {
    /// Index of the later of the two states.
    pub steps: usize,
    pub even: Vec<f64>,
    pub odd: Vec<f64>,
}

impl Settled {
    /// Cesàro limit of `1ᵀx_t`, the mean of the two parities.
    pub fn average_total(&self) -> f64 {
        (self.even.iter().sum::<f64>() + self.odd.iter().sum::<f64>()) / 2.0
    }
}

/// Propagates until `‖x_{t+2} − x_t‖∞ ≤ tolerance`.
pub fn run_to_horizon(
    g: &SignedDigraph,
    x0: &ColorDistribution,
    tolerance: f64,
    cap: usize,
) -> Result<Settled> {
    let mut p = Propagator::new(g, x0)?;
    let mut two_back = p.current().to_vec();
    let mut one_back = p.advance().to_vec();
    let mut change = f64::INFINITY;
    while p.step_index() < cap {
        p.advance();
        change = p
            .current()
            .iter()
            .zip(&two_back)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        two_back = std::mem::replace(&mut one_back, p.current().to_vec());
        if change <= tolerance {
            let t = p.step_index();
            let (even, odd) = if t % 2 == 0 {
                (one_back, two_back)
            } else {
                (two_back, one_back)
            };
            return Ok(Settled {
                steps: t,
                even,
                odd,
            });
        }
    }
    Err(Error::SlowMixing { steps: cap, change })
}

/// Which of the two coupling systems to solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Coupling {
    /// `(I − P_X)u = P_Y 1̂`.
    Balanced,
    /// `(I + P_X)u = P_Y 1̂`.
    AntiBalanced,
}

impl Coupling {
    fn sign(self) -> f64 {
        match self {
            Coupling::Balanced => 1.0,
            Coupling::AntiBalanced => -1.0,
        }
    }
}

/// `P_Y 1̂_{Z,S_Z}` on `X`: for each non-sink node the signed transition
/// mass into sink `sink`, counted positive on `S_Z` and negative on `S̄_Z`.
pub fn coupling_rhs(
    g: &SignedDigraph,
    d: &Decomposition,
    sink: usize,
    partition: &Partition,
) -> Vec<f64> {
    d.non_sink()
        .iter()
        .map(|&i| {
            let acc: f64 = g
                .out_edges(i)
                .iter()
                .filter(|e| d.block_of(e.target) == Block::Sink(sink))
                .map(|e| e.signed_weight() * partition.sign(d.local_index(e.target)))
                .sum();
            acc / g.total_out_weight(i)
        })
        .collect()
}

/// `P_X` in local `X` coordinates as `(row, col, p)` triples.
fn restricted_to_x(g: &SignedDigraph, d: &Decomposition) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for (li, &i) in d.non_sink().iter().enumerate() {
        let w = g.total_out_weight(i);
        for e in g.out_edges(i) {
            if d.block_of(e.target) == Block::NonSink {
                out.push((li, d.local_index(e.target), e.signed_weight() / w));
            }
        }
    }
    out
}

/// Iteration budget for the coupling solve, `max(1000, 10·n·ln n)`.
pub fn coupling_cap(n: usize) -> usize {
    let nf = n as f64;
    ((10.0 * nf * nf.ln()).ceil() as usize).max(1000)
}

/// Solves `(I ∓ P_X)u = b` for every right-hand side in `rhs` by the
/// Neumann iteration `u ← b ± P_X u`, with a dense fallback for small `X`.
pub fn solve_coupling(
    g: &SignedDigraph,
    d: &Decomposition,
    mode: Coupling,
    rhs: &[Vec<f64>],
) -> Result<Vec<Vec<f64>>> {
    let nx = d.non_sink().len();
    for b in rhs {
        if b.len() != nx {
            return Err(Error::LengthMismatch {
                expected: nx,
                got: b.len(),
            });
        }
    }
    if rhs.is_empty() || nx == 0 {
        return Ok(rhs.to_vec());
    }
    let px = restricted_to_x(g, d);
    let sign = mode.sign();
    let apply = |u: &[f64], b: &[f64]| -> Vec<f64> {
        let mut out = b.to_vec();
        for &(r, c, p) in &px {
            out[r] += sign * p * u[c];
        }
        out
    };
    let residual = |u: &[f64], b: &[f64]| -> f64 {
        apply(u, b)
            .iter()
            .zip(u)
            .map(|(a, x)| (a - x).abs())
            .fold(0.0, f64::max)
    };

    let cap = coupling_cap(nx);
    let mut solutions = Vec::with_capacity(rhs.len());
    for b in rhs {
        let mut u = b.clone();
        let mut change = f64::INFINITY;
        for _ in 0..cap {
            let next = apply(&u, b);
            change = next
                .iter()
                .zip(&u)
                .map(|(a, x)| (a - x).abs())
                .fold(0.0, f64::max);
            u = next;
            if change <= COUPLING_TOLERANCE {
                break;
            }
        }
        if change <= COUPLING_TOLERANCE && residual(&u, b) <= 1e-10 {
            solutions.push(u);
            continue;
        }
        if nx > DIRECT_SOLVE_LIMIT {
            return Err(Error::NoConvergence {
                iterations: cap,
                residual: residual(&u, b),
            });
        }
        let direct = dense_coupling(nx, &px, sign, b).ok_or(Error::NoConvergence {
            iterations: cap,
            residual: f64::NAN,
        })?;
        let r = residual(&direct, b);
        if r > 1e-10 {
            return Err(Error::NoConvergence {
                iterations: cap,
                residual: r,
            });
        }
        solutions.push(direct);
    }
    Ok(solutions)
}

fn dense_coupling(n: usize, px: &[(usize, usize, f64)], sign: f64, b: &[f64]) -> Option<Vec<f64>> {
    let mut a = DMatrix::<f64>::identity(n, n);
    for &(r, c, p) in px {
        a[(r, c)] -= sign * p;
    }
    let rhs = nalgebra::DVector::from_column_slice(b);
    a.lu().solve(&rhs).map(|x| x.iter().copied().collect())
}

/// `u_b` or `u_u` for one sink.
pub fn solve_u(
    g: &SignedDigraph,
    d: &Decomposition,
    sink: usize,
    partition: &Partition,
    mode: Coupling,
) -> Result<Vec<f64>> {
    let b = coupling_rhs(g, d, sink, partition);
    Ok(solve_coupling(g, d, mode, &[b])?.remove(0))
}

/// Analysis of one ergodic sink.
#[derive(Clone, Debug, Serialize)]
pub struct SinkAnalysis {
    /// Component id in the decomposition.
    pub component: usize,
    pub nodes: Vec<usize>,
    pub kind: BalanceKind,
    pub partition: Option<Partition>,
    /// Stationary distribution aligned with `nodes`.
    pub pi: Vec<f64>,
    /// `u_b` (balanced) or `u_u` (anti-balanced) on `X`; `None` for
    /// strictly unbalanced sinks or when `X` is empty.
    pub coupling: Option<Vec<f64>>,
}

impl SinkAnalysis {
    /// `π̂_S`, or `None` for a strictly unbalanced sink.
    pub fn signed_pi(&self) -> Option<Vec<f64>> {
        self.partition.as_ref().map(|p| p.signed(&self.pi))
    }

    /// `π̂_Sᵀ(x0_Z − ½1)`; zero for a strictly unbalanced sink.
    pub fn scale(&self, x0: &[f64]) -> f64 {
        match &self.partition {
            Some(p) => self
                .nodes
                .iter()
                .enumerate()
                .map(|(l, &v)| p.sign(l) * self.pi[l] * (x0[v] - 0.5))
                .sum(),
            None => 0.0,
        }
    }
}

/// Structure of the whole graph as the long-term formulas need it: the
/// decomposition plus stationary distribution, partition and coupling
/// vector of every sink. Independent of the initial state.
#[derive(Clone, Debug)]
pub struct LongTermModel {
    pub decomposition: Decomposition,
    pub sinks: Vec<SinkAnalysis>,
}

impl LongTermModel {
    /// # Errors
    /// `PeriodicComponent` if a sink has period other than one.
    pub fn build(g: &SignedDigraph) -> Result<Self> {
        let d = decompose(g);
        let mut sinks = Vec::with_capacity(d.sink_count());
        for i in 0..d.sink_count() {
            let nodes = d.sink_nodes(i).to_vec();
            let component = d.sinks()[i];
            let p = period(&nodes, g)?;
            if p != 1 {
                return Err(Error::PeriodicComponent {
                    component,
                    period: p,
                });
            }
            let class = classify_balance(&nodes, g)?;
            let pi = stationary(&nodes, g)?;
            sinks.push(SinkAnalysis {
                component,
                kind: class.kind(),
                partition: match class {
                    BalanceClass::Balanced(p) | BalanceClass::AntiBalanced(p) => Some(p),
                    BalanceClass::StrictlyUnbalanced => None,
                },
                nodes,
                pi,
                coupling: None,
            });
        }

        if !d.non_sink().is_empty() {
            for mode in [Coupling::Balanced, Coupling::AntiBalanced] {
                let want = match mode {
                    Coupling::Balanced => BalanceKind::Balanced,
                    Coupling::AntiBalanced => BalanceKind::AntiBalanced,
                };
                let picked: Vec<usize> = (0..sinks.len())
                    .filter(|&i| sinks[i].kind == want)
                    .collect();
                let rhs: Vec<Vec<f64>> = picked
                    .iter()
                    .map(|&i| {
                        let p = sinks[i]
                            .partition
                            .as_ref()
                            .expect("classified with partition");
                        coupling_rhs(g, &d, i, p)
                    })
                    .collect();
                for (i, u) in picked.into_iter().zip(solve_coupling(g, &d, mode, &rhs)?) {
                    sinks[i].coupling = Some(u);
                }
            }
        }
        Ok(LongTermModel {
            decomposition: d,
            sinks,
        })
    }

    pub fn has_anti_balanced_sink(&self) -> bool {
        self.sinks
            .iter()
            .any(|s| s.kind == BalanceKind::AntiBalanced)
    }

    /// Even- and odd-step limits from `x0`.
    pub fn limits(&self, x0: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.decomposition.node_count();
        let mut even = vec![0.5; n];
        let mut odd = vec![0.5; n];
        let x_nodes = self.decomposition.non_sink();
        for sink in &self.sinks {
            let Some(p) = &sink.partition else { continue };
            let s = sink.scale(x0);
            let flip = match sink.kind {
                BalanceKind::AntiBalanced => -1.0,
                _ => 1.0,
            };
            for (l, &v) in sink.nodes.iter().enumerate() {
                even[v] += p.sign(l) * s;
                odd[v] += flip * p.sign(l) * s;
            }
            if let Some(u) = &sink.coupling {
                // balanced: +u_b s on both parities; anti-balanced: −u_u s on
                // even steps and +u_u s on odd steps
                for (l, &v) in x_nodes.iter().enumerate() {
                    even[v] += flip * u[l] * s;
                    odd[v] += u[l] * s;
                }
            }
        }
        (even, odd)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SteadyKind {
    Fixed,
    Oscillating,
    UniformHalf,
}

/// Long-term behavior from a given initial state. For non-oscillating
/// graphs `even == odd`.
#[derive(Clone, Debug, Serialize)]
pub struct SteadyState {
    pub kind: SteadyKind,
    pub even: ColorDistribution,
    pub odd: ColorDistribution,
    /// Non-sink nodes `X`.
    pub non_sink: Vec<usize>,
    pub sinks: Vec<SinkAnalysis>,
}

impl SteadyState {
    /// The limit for `Fixed`/`UniformHalf`, the even-step limit otherwise.
    pub fn x(&self) -> &ColorDistribution {
        &self.even
    }

    /// Per-node Cesàro limit `(x_e + x_o) / 2`.
    pub fn average(&self) -> Vec<f64> {
        self.even
            .as_slice()
            .iter()
            .zip(self.odd.as_slice())
            .map(|(a, b)| (a + b) / 2.0)
            .collect()
    }

    /// Cesàro limit of the expected white count.
    pub fn average_total(&self) -> f64 {
        (self.even.total() + self.odd.total()) / 2.0
    }
}

fn clamp_unit(v: Vec<f64>) -> ColorDistribution {
    ColorDistribution::from_vec_unchecked(v.into_iter().map(|x| x.clamp(0.0, 1.0)).collect())
}

pub fn steady_state(g: &SignedDigraph, x0: &ColorDistribution) -> Result<SteadyState> {
    let model = LongTermModel::build(g)?;
    steady_state_with(&model, x0)
}

/// [`steady_state`] reusing a prebuilt model, for many initial states on
/// one graph.
pub fn steady_state_with(model: &LongTermModel, x0: &ColorDistribution) -> Result<SteadyState> {
    let n = model.decomposition.node_count();
    if x0.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    let (even, odd) = model.limits(x0.as_slice());
    let kind = if model.has_anti_balanced_sink() {
        SteadyKind::Oscillating
    } else if even.iter().all(|&v| v == 0.5) {
        SteadyKind::UniformHalf
    } else {
        SteadyKind::Fixed
    };
    Ok(SteadyState {
        kind,
        even: clamp_unit(even),
        odd: clamp_unit(odd),
        non_sink: model.decomposition.non_sink().to_vec(),
        sinks: model.sinks.clone(),
    })
}

/// `|1ᵀx_o − 1ᵀx_e| / 2`.
pub fn oscillation_amplitude(steady: &SteadyState) -> Result<f64> {
    if steady.kind != SteadyKind::Oscillating {
        return Err(Error::WrongKind {
            expected: "Oscillating",
            found: format!("{:?}", steady.kind),
        });
    }
    Ok((steady.odd.total() - steady.even.total()).abs() / 2.0)
}
