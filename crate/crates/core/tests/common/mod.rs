#![allow(clippy::needless_range_loop)]
//! Independent oracles and random instance builders shared by the
//! integration tests. Nothing here calls into the library's numerics: dense
//! matrices are assembled straight from raw edge triples.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use signed_voter::graph::SignedDigraph;

pub type Edges = Vec<(usize, usize, f64)>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------- dense

pub type Mat = Vec<Vec<f64>>;

pub fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![0.0; c]; r]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let (r, k, c) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    let mut out = zeros(r, c);
    for i in 0..r {
        for l in 0..k {
            let x = a[i][l];
            if x != 0.0 {
                for j in 0..c {
                    out[i][j] += x * b[l][j];
                }
            }
        }
    }
    out
}

pub fn matvec(a: &Mat, v: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn add(a: &Mat, b: &Mat, scale: f64) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + scale * y).collect())
        .collect()
}

pub fn max_norm(a: &Mat) -> f64 {
    a.iter().flatten().fold(0.0, |m, x| f64::max(m, x.abs()))
}

/// Gaussian elimination with partial pivoting.
pub fn gauss_solve(a: &Mat, b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut m: Mat = a.clone();
    let mut x = b.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        assert!(m[pivot][col].abs() > 1e-14, "singular system");
        m.swap(col, pivot);
        x.swap(col, pivot);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f != 0.0 {
                for c in col..n {
                    m[r][c] -= f * m[col][c];
                }
                x[r] -= f * x[col];
            }
        }
    }
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (x[r] - s) / m[r][r];
    }
    x
}

pub fn inverse(a: &Mat) -> Mat {
    let n = a.len();
    let cols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            gauss_solve(a, &e)
        })
        .collect();
    (0..n)
        .map(|i| (0..n).map(|j| cols[j][i]).collect())
        .collect()
}

/// Dense `P`, `P̄` and `g⁻` built directly from signed edge triples.
pub struct Dense {
    pub n: usize,
    pub p: Mat,
    pub pbar: Mat,
    pub ground: Vec<f64>,
}

impl Dense {
    pub fn new(n: usize, edges: &[(usize, usize, f64)]) -> Self {
        let mut d = vec![0.0; n];
        for &(s, _, w) in edges {
            d[s] += w.abs();
        }
        let mut p = zeros(n, n);
        let mut pbar = zeros(n, n);
        let mut ground = vec![0.0; n];
        for &(s, t, w) in edges {
            p[s][t] += w / d[s];
            pbar[s][t] += w.abs() / d[s];
            if w < 0.0 {
                ground[s] += w.abs() / d[s];
            }
        }
        Dense { n, p, pbar, ground }
    }

    pub fn step(&self, x: &[f64]) -> Vec<f64> {
        matvec(&self.p, x)
            .into_iter()
            .zip(&self.ground)
            .map(|(a, g)| a + g)
            .collect()
    }

    /// `[x_0, …, x_t]`.
    pub fn propagate(&self, x0: &[f64], t: usize) -> Vec<Vec<f64>> {
        let mut out = vec![x0.to_vec()];
        for _ in 0..t {
            let next = self.step(out.last().unwrap());
            out.push(next);
        }
        out
    }

    pub fn totals(&self, x0: &[f64], t: usize) -> Vec<f64> {
        self.propagate(x0, t)
            .iter()
            .map(|x| x.iter().sum())
            .collect()
    }

    /// Stationary distribution of `P̄` restricted to `nodes`, rows
    /// renormalized, by a direct solve.
    pub fn stationary(&self, nodes: &[usize]) -> Vec<f64> {
        let m = nodes.len();
        let mut sub = zeros(m, m);
        for (a, &u) in nodes.iter().enumerate() {
            let row: f64 = nodes.iter().map(|&v| self.pbar[u][v]).sum();
            for (b, &v) in nodes.iter().enumerate() {
                sub[a][b] = self.pbar[u][v] / row;
            }
        }
        // (P̄ᵀ − I)π = 0 with the last equation replaced by Σπ = 1
        let mut a = zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                a[i][j] = sub[j][i] - if i == j { 1.0 } else { 0.0 };
            }
        }
        a[m - 1] = vec![1.0; m];
        let mut b = vec![0.0; m];
        b[m - 1] = 1.0;
        gauss_solve(&a, &b)
    }
}

/// Nodes reachable from `start` along directed edges.
pub fn reachable(n: usize, edges: &[(usize, usize, f64)], start: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(u) = stack.pop() {
        for &(s, t, _) in edges {
            if s == u && !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    seen
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Balanced,
    AntiBalanced,
    StrictlyUnbalanced,
}

/// Classifies by trying every bipartition with `nodes[0]` fixed in `S`.
/// Returns the class and, if any, the side assignment found.
pub fn brute_force_class(
    nodes: &[usize],
    edges: &[(usize, usize, f64)],
) -> (Class, Option<Vec<bool>>) {
    let m = nodes.len();
    assert!(m <= 16);
    let pos = |v: usize| nodes.iter().position(|&x| x == v);
    let inside: Vec<(usize, usize, f64)> = edges
        .iter()
        .filter_map(|&(s, t, w)| Some((pos(s)?, pos(t)?, w)))
        .collect();
    for (negated, class) in [(false, Class::Balanced), (true, Class::AntiBalanced)] {
        for mask in 0..(1u32 << (m - 1)) {
            let side: Vec<bool> = (0..m).map(|i| i == 0 || mask >> (i - 1) & 1 == 0).collect();
            let ok = inside.iter().all(|&(a, b, w)| {
                let positive = (w > 0.0) != negated;
                (side[a] == side[b]) == positive
            });
            if ok {
                return (class, Some(side));
            }
        }
    }
    (Class::StrictlyUnbalanced, None)
}

// ---------------------------------------------------------------- builders

pub fn weight(rng: &mut ChaCha8Rng) -> f64 {
    if rng.random_bool(0.5) {
        1.0
    } else {
        rng.random_range(0.5..3.0)
    }
}

fn signed(rng: &mut ChaCha8Rng, positive: bool) -> f64 {
    let w = weight(rng);
    if positive {
        w
    } else {
        -w
    }
}

/// Random ergodic block of the given class on `offset..offset + size`:
/// a Hamiltonian cycle, random chords, and self-loops that force
/// aperiodicity. A strictly unbalanced block gets one positive and one
/// negative self-loop, which no bipartition can satisfy either way.
pub fn ergodic_block(
    rng: &mut ChaCha8Rng,
    offset: usize,
    size: usize,
    extra: usize,
    class: Class,
) -> Edges {
    assert!(size >= 2 || class != Class::StrictlyUnbalanced);
    let side: Vec<bool> = (0..size).map(|_| rng.random_bool(0.5)).collect();
    let sign_for = |rng: &mut ChaCha8Rng, a: usize, b: usize| -> bool {
        match class {
            Class::Balanced => side[a] == side[b],
            Class::AntiBalanced => side[a] != side[b],
            Class::StrictlyUnbalanced => rng.random_bool(0.5),
        }
    };
    let mut order: Vec<usize> = (0..size).collect();
    order.shuffle(rng);
    let mut pairs = std::collections::BTreeSet::new();
    let mut edges = Vec::new();
    let mut push = |rng: &mut ChaCha8Rng, a: usize, b: usize, positive: bool, edges: &mut Edges| {
        if pairs.insert((a, b)) {
            edges.push((offset + a, offset + b, signed(rng, positive)));
        }
    };
    if size > 1 {
        for i in 0..size {
            let (a, b) = (order[i], order[(i + 1) % size]);
            let s = sign_for(rng, a, b);
            push(rng, a, b, s, &mut edges);
        }
    }
    for _ in 0..extra {
        let a = rng.random_range(0..size);
        let b = rng.random_range(0..size);
        if a != b {
            let s = sign_for(rng, a, b);
            push(rng, a, b, s, &mut edges);
        }
    }
    match class {
        Class::Balanced => push(rng, order[0], order[0], true, &mut edges),
        Class::AntiBalanced => push(rng, order[0], order[0], false, &mut edges),
        Class::StrictlyUnbalanced => {
            push(rng, order[0], order[0], true, &mut edges);
            push(rng, order[1], order[1], false, &mut edges);
        }
    }
    edges
}

pub fn random_class(rng: &mut ChaCha8Rng) -> Class {
    [
        Class::Balanced,
        Class::AntiBalanced,
        Class::StrictlyUnbalanced,
    ][rng.random_range(0..3)]
}

/// Non-sink nodes `x_range` feeding into the listed sink ranges. Every
/// non-sink node has at least one edge into a sink, so none of them can
/// lie in a sink component.
pub fn non_sink_edges(
    rng: &mut ChaCha8Rng,
    x_range: std::ops::Range<usize>,
    sinks: &[std::ops::Range<usize>],
) -> Edges {
    let mut edges = Vec::new();
    for u in x_range.clone() {
        let mut targets = std::collections::BTreeSet::new();
        let sink = &sinks[rng.random_range(0..sinks.len())];
        targets.insert(rng.random_range(sink.clone()));
        for _ in 0..rng.random_range(0..3) {
            let sink = &sinks[rng.random_range(0..sinks.len())];
            targets.insert(rng.random_range(sink.clone()));
        }
        for _ in 0..rng.random_range(0..4) {
            targets.insert(rng.random_range(x_range.clone()));
        }
        for t in targets {
            let positive = rng.random_bool(0.5);
            edges.push((u, t, signed(rng, positive)));
        }
    }
    edges
}

/// Non-sink set of `nx` nodes followed by one sink per entry of `classes`.
pub fn weakly_connected(
    rng: &mut ChaCha8Rng,
    nx: usize,
    classes: &[(Class, usize)],
    extra_per_node: usize,
) -> (usize, Edges) {
    let mut edges = Vec::new();
    let mut ranges = Vec::new();
    let mut next = nx;
    for &(class, size) in classes {
        edges.extend(ergodic_block(rng, next, size, extra_per_node * size, class));
        ranges.push(next..next + size);
        next += size;
    }
    edges.extend(non_sink_edges(rng, 0..nx, &ranges));
    (next, edges)
}

/// Arbitrary graph: every node gets 1 to 4 distinct random out-neighbors
/// with random signs. No structural guarantees beyond no dangling nodes.
pub fn arbitrary(rng: &mut ChaCha8Rng, n: usize) -> Edges {
    let mut edges = Vec::new();
    for u in 0..n {
        let mut targets = std::collections::BTreeSet::new();
        for _ in 0..rng.random_range(1..=4) {
            targets.insert(rng.random_range(0..n));
        }
        for t in targets {
            let positive = rng.random_bool(0.5);
            edges.push((u, t, signed(rng, positive)));
        }
    }
    edges
}

pub fn build(n: usize, edges: &[(usize, usize, f64)]) -> SignedDigraph {
    SignedDigraph::from_edges(n, edges, Default::default()).expect("valid test graph")
}

pub fn random_x0(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.0..=1.0)).collect()
}

pub fn random_seeds(rng: &mut ChaCha8Rng, n: usize, max: usize) -> Vec<usize> {
    let k = rng.random_range(0..=max.min(n));
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    let mut s = all[..k].to_vec();
    s.sort_unstable();
    s
}

pub fn indicator(n: usize, seeds: &[usize]) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for &s in seeds {
        x[s] = 1.0;
    }
    x
}

/// Long-horizon Cesàro value of `1ᵀx_t` from `x0` by dense propagation:
/// run `steps` steps and average the last two.
pub fn dense_cesaro_total(d: &Dense, x0: &[f64], steps: usize) -> f64 {
    let mut x = x0.to_vec();
    let mut prev = x.clone();
    for _ in 0..steps {
        prev = x;
        x = d.step(&prev);
    }
    (x.iter().sum::<f64>() + prev.iter().sum::<f64>()) / 2.0
}
