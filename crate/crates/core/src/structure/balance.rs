use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Sign, SignedDigraph};

/// A node set viewed as its own subgraph, with edges leaving the set dropped.
pub(crate) struct Induced {
    /// `(local source, local target, sign, weight)`.
    pub edges: Vec<(usize, usize, Sign, f64)>,
    pub out: Vec<Vec<usize>>,
    pub len: usize,
}

impl Induced {
    pub fn new(nodes: &[usize], g: &SignedDigraph) -> Self {
        let local: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        let mut out = vec![Vec::new(); nodes.len()];
        for (lu, &u) in nodes.iter().enumerate() {
            for e in g.out_edges(u) {
                if let Some(&lv) = local.get(&e.target) {
                    edges.push((lu, lv, e.sign, e.weight));
                    out[lu].push(lv);
                }
            }
        }
        Induced {
            edges,
            out,
            len: nodes.len(),
        }
    }

    fn reaches_all(&self, adj: &[Vec<usize>]) -> bool {
        let mut seen = vec![false; self.len];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.len
    }

    pub fn is_strongly_connected(&self) -> bool {
        if self.len == 0 {
            return false;
        }
        let mut rev = vec![Vec::new(); self.len];
        for &(u, v, _, _) in &self.edges {
            rev[v].push(u);
        }
        self.reaches_all(&self.out) && self.reaches_all(&rev)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Period of a strongly connected node set: the gcd of its cycle lengths,
/// or 0 when the set contains no cycle at all.
pub fn period(nodes: &[usize], g: &SignedDigraph) -> Result<usize> {
    let sub = Induced::new(nodes, g);
    if !sub.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let mut level = vec![usize::MAX; sub.len];
    level[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        for &v in &sub.out[u] {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    Ok(sub.edges.iter().fold(0, |acc, &(u, v, _, _)| {
        gcd(acc, (level[u] + 1).abs_diff(level[v]))
    }))
}

pub fn is_aperiodic(nodes: &[usize], g: &SignedDigraph) -> Result<bool> {
    Ok(period(nodes, g)? == 1)
}

/// Split of a component into `S` and `S̄`, aligned with the component's node
/// order. The smallest node id always lies in `S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    in_s: Vec<bool>,
}

impl Partition {
    pub fn new(in_s: Vec<bool>) -> Self {
        Partition { in_s }
    }

    pub fn in_s(&self, local: usize) -> bool {
        self.in_s[local]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.in_s
    }

    pub fn len(&self) -> usize {
        self.in_s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.in_s.is_empty()
    }

    pub fn size_s(&self) -> usize {
        self.in_s.iter().filter(|&&b| b).count()
    }

    pub fn size_s_bar(&self) -> usize {
        self.len() - self.size_s()
    }

    /// `+1` on `S`, `-1` on `S̄`.
    pub fn sign(&self, local: usize) -> f64 {
        if self.in_s[local] {
            1.0
        } else {
            -1.0
        }
    }

    /// The signed indicator `1̂_S`.
    pub fn signed_ones(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.sign(i)).collect()
    }

    /// `v̂_S`: `v` with entries outside `S` negated.
    pub fn signed(&self, v: &[f64]) -> Vec<f64> {
        v.iter()
            .enumerate()
            .map(|(i, &x)| self.sign(i) * x)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BalanceKind {
    Balanced,
    AntiBalanced,
    StrictlyUnbalanced,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BalanceClass {
    Balanced(Partition),
    AntiBalanced(Partition),
    StrictlyUnbalanced,
}

impl BalanceClass {
    pub fn kind(&self) -> BalanceKind {
        match self {
            BalanceClass::Balanced(_) => BalanceKind::Balanced,
            BalanceClass::AntiBalanced(_) => BalanceKind::AntiBalanced,
            BalanceClass::StrictlyUnbalanced => BalanceKind::StrictlyUnbalanced,
        }
    }

    pub fn partition(&self) -> Option<&Partition> {
        match self {
            BalanceClass::Balanced(p) | BalanceClass::AntiBalanced(p) => Some(p),
            BalanceClass::StrictlyUnbalanced => None,
        }
    }
}

/// Two-colors the undirected sign skeleton of a strongly connected node set:
/// positive edges join equal colors and negative edges join opposite colors
/// (the other way round when `negated`). Returns `None` on a conflict.
pub fn two_coloring(
    nodes: &[usize],
    g: &SignedDigraph,
    negated: bool,
) -> Result<Option<Partition>> {
    let sub = Induced::new(nodes, g);
    if !sub.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    Ok(color_skeleton(&sub, nodes, negated))
}

fn color_skeleton(sub: &Induced, nodes: &[usize], negated: bool) -> Option<Partition> {
    // adjacency with "differs" flags, both directions
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); sub.len];
    for &(u, v, sign, _) in &sub.edges {
        let differs = sign.is_negative() != negated;
        adj[u].push((v, differs));
        adj[v].push((u, differs));
    }

    let start = (0..sub.len).min_by_key(|&i| nodes[i])?;
    let mut color: Vec<Option<bool>> = vec![None; sub.len];
    color[start] = Some(true);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let cu = color[u].expect("queued nodes are colored");
        for &(v, differs) in &adj[u] {
            let want = cu != differs;
            match color[v] {
                None => {
                    color[v] = Some(want);
                    queue.push_back(v);
                }
                Some(cv) if cv != want => return None,
                Some(_) => {}
            }
        }
    }
    Some(Partition::new(
        color.into_iter().map(|c| c.unwrap_or(true)).collect(),
    ))
}

/// Balanced, anti-balanced or strictly unbalanced, with the canonical
/// partition for the first two.
pub fn classify_balance(nodes: &[usize], g: &SignedDigraph) -> Result<BalanceClass> {
    let sub = Induced::new(nodes, g);
    if !sub.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    if let Some(p) = color_skeleton(&sub, nodes, false) {
        return Ok(BalanceClass::Balanced(p));
    }
    if let Some(p) = color_skeleton(&sub, nodes, true) {
        return Ok(BalanceClass::AntiBalanced(p));
    }
    Ok(BalanceClass::StrictlyUnbalanced)
}
