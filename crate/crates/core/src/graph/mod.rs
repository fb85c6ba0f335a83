//! Signed digraph storage and the matrix-free action of the signed
//! transition matrix `P = D⁻¹A`.
//!
//! Out-edges live in a compressed row layout sorted by target id, so every
//! product iterates edges in the same order and results are reproducible
//! bit for bit.

mod color;
pub mod generate;
pub mod snap;

pub use color::ColorDistribution;
pub use generate::{generate, Family, GeneratorConfig};
pub use snap::{parse_snap, serialize_snap, snap_stats, ParsedSnap, SnapStats};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn of(value: f64) -> Sign {
        if value < 0.0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutEdge {
    pub target: usize,
    /// Strictly positive magnitude `|A_ij|`.
    pub weight: f64,
    pub sign: Sign,
}

impl OutEdge {
    pub fn signed_weight(&self) -> f64 {
        self.sign.value() * self.weight
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Give every node without out-edges a positive unit self-loop instead
    /// of rejecting the graph.
    pub repair_dangling: bool,
}

/// Weighted signed digraph. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedDigraph {
    offsets: Vec<usize>,
    edges: Vec<OutEdge>,
    total_out_weight: Vec<f64>,
}

impl SignedDigraph {
    /// Builds a graph from `(src, dst, signed_weight)` triples. The node count
    /// is one past the largest id mentioned.
    pub fn from_edge_list(edges: &[(usize, usize, f64)]) -> Result<Self> {
        let n = edges
            .iter()
            .map(|&(s, d, _)| s.max(d) + 1)
            .max()
            .unwrap_or(0);
        Self::from_edges(n, edges, BuildOptions::default())
    }

    pub fn from_edges(
        n: usize,
        edges: &[(usize, usize, f64)],
        options: BuildOptions,
    ) -> Result<Self> {
        let mut rows: Vec<Vec<OutEdge>> = vec![Vec::new(); n];
        for &(src, dst, w) in edges {
            for node in [src, dst] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            if w == 0.0 {
                return Err(Error::ZeroWeightEdge { src, dst });
            }
            if !w.is_finite() {
                return Err(Error::NonFiniteWeight { src, dst });
            }
            rows[src].push(OutEdge {
                target: dst,
                weight: w.abs(),
                sign: Sign::of(w),
            });
        }

        for (i, row) in rows.iter_mut().enumerate() {
            if row.is_empty() {
                if options.repair_dangling {
                    row.push(OutEdge {
                        target: i,
                        weight: 1.0,
                        sign: Sign::Positive,
                    });
                } else {
                    return Err(Error::DanglingNode { node: i });
                }
            }
            row.sort_by_key(|e| e.target);
            if let Some(pair) = row.windows(2).find(|p| p[0].target == p[1].target) {
                return Err(Error::DuplicateEdge {
                    src: i,
                    dst: pair[0].target,
                });
            }
        }

        Ok(Self::from_rows(rows))
    }

    fn from_rows(rows: Vec<Vec<OutEdge>>) -> Self {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        let mut total_out_weight = Vec::with_capacity(rows.len());
        let mut edges = Vec::with_capacity(rows.iter().map(Vec::len).sum());
        for row in rows {
            total_out_weight.push(row.iter().map(|e| e.weight).sum());
            edges.extend(row);
            offsets.push(edges.len());
        }
        SignedDigraph {
            offsets,
            edges,
            total_out_weight,
        }
    }

    pub fn node_count(&self) -> usize {
        self.total_out_weight.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn negative_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.sign.is_negative()).count()
    }

    /// Out-edges of `node`, sorted by target id.
    pub fn out_edges(&self, node: usize) -> &[OutEdge] {
        &self.edges[self.offsets[node]..self.offsets[node + 1]]
    }

    /// `d_i = Σ_j |A_ij|`.
    pub fn total_out_weight(&self, node: usize) -> f64 {
        self.total_out_weight[node]
    }

    pub fn out_weights(&self) -> &[f64] {
        &self.total_out_weight
    }

    /// `d⁺_i`, the weight of positive out-edges.
    pub fn positive_out_weight(&self, node: usize) -> f64 {
        self.out_edges(node)
            .iter()
            .filter(|e| !e.sign.is_negative())
            .map(|e| e.weight)
            .sum()
    }

    /// `d⁻_i`, the weight of negative out-edges.
    pub fn negative_out_weight(&self, node: usize) -> f64 {
        self.out_edges(node)
            .iter()
            .filter(|e| e.sign.is_negative())
            .map(|e| e.weight)
            .sum()
    }

    /// All edges as `(src, edge)` in source-major, target-sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, &OutEdge)> + '_ {
        (0..self.node_count()).flat_map(move |i| self.out_edges(i).iter().map(move |e| (i, e)))
    }

    pub fn to_edge_list(&self) -> Vec<(usize, usize, f64)> {
        self.edges()
            .map(|(s, e)| (s, e.target, e.signed_weight()))
            .collect()
    }

    /// `g⁻(i)`: weighted fraction of node `i`'s out-edges that are negative.
    pub fn ground_vector(&self) -> Vec<f64> {
        (0..self.node_count())
            .map(|i| self.negative_out_weight(i) / self.total_out_weight[i])
            .collect()
    }

    /// `P·v`, evaluated edge by edge.
    pub fn apply_p(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.node_count()];
        self.apply_p_into(v, &mut out);
        out
    }

    pub fn apply_p_into(&self, v: &[f64], out: &mut [f64]) {
        assert_eq!(v.len(), self.node_count());
        for (i, o) in out.iter_mut().enumerate() {
            let acc: f64 = self
                .out_edges(i)
                .iter()
                .map(|e| e.signed_weight() * v[e.target])
                .sum();
            *o = acc / self.total_out_weight[i];
        }
    }

    /// `Pᵀ·v`, i.e. the row vector `vᵀP`.
    pub fn apply_p_transpose(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.node_count()];
        self.apply_p_transpose_into(v, &mut out);
        out
    }

    pub fn apply_p_transpose_into(&self, v: &[f64], out: &mut [f64]) {
        assert_eq!(v.len(), self.node_count());
        out.fill(0.0);
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0.0 {
                continue;
            }
            let scale = vi / self.total_out_weight[i];
            for e in self.out_edges(i) {
                out[e.target] += e.signed_weight() * scale;
            }
        }
    }

    /// `P̄ᵀ·v` for the unsigned chain `P̄ = D⁻¹|A|`.
    pub fn apply_unsigned_transpose(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.node_count()];
        for (i, &vi) in v.iter().enumerate() {
            let scale = vi / self.total_out_weight[i];
            for e in self.out_edges(i) {
                out[e.target] += e.weight * scale;
            }
        }
        out
    }

    /// Same topology and weights with every sign flipped.
    pub fn negate_signs(&self) -> SignedDigraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.sign = e.sign.flip();
        }
        g
    }

    /// Checks the structural invariants. Constructors already guarantee
    /// them; this exists for tests and for graphs assembled elsewhere.
    pub fn check_invariants(&self) -> Result<()> {
        for i in 0..self.node_count() {
            let row = self.out_edges(i);
            if row.is_empty() {
                return Err(Error::DanglingNode { node: i });
            }
            for pair in row.windows(2) {
                if pair[0].target >= pair[1].target {
                    return Err(Error::DuplicateEdge {
                        src: i,
                        dst: pair[1].target,
                    });
                }
            }
            let sum: f64 = row.iter().map(|e| e.weight).sum();
            let d = self.total_out_weight[i];
            if (sum - d).abs() > 1e-12 * d.max(1.0) {
                return Err(Error::InvalidConfig(format!(
                    "total out-weight of node {i} is {d}, edges sum to {sum}"
                )));
            }
            if let Some(e) = row
                .iter()
                .find(|e| !e.weight.is_finite() || e.weight <= 0.0)
            {
                return Err(Error::ZeroWeightEdge {
                    src: i,
                    dst: e.target,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn minimal_cycle() {
        let g = SignedDigraph::from_edge_list(&[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.out_weights(), &[1.0, 1.0]);
        assert_eq!(g.ground_vector(), vec![0.0, 0.0]);
    }

    #[test]
    fn degree_and_ground_arithmetic() {
        let g = SignedDigraph::from_edge_list(&[(0, 1, -2.0), (1, 0, 1.0), (0, 0, 1.0)]).unwrap();
        assert_eq!(g.out_weights(), &[3.0, 1.0]);
        assert!(close(&g.ground_vector(), &[2.0 / 3.0, 0.0], 1e-15));
    }

    #[test]
    fn dangling_node_rejected_unless_repaired() {
        let err = SignedDigraph::from_edge_list(&[(0, 1, 1.0)]).unwrap_err();
        assert_eq!(err, Error::DanglingNode { node: 1 });

        let g = SignedDigraph::from_edges(
            2,
            &[(0, 1, 1.0)],
            BuildOptions {
                repair_dangling: true,
            },
        )
        .unwrap();
        assert_eq!(
            g.out_edges(1),
            &[OutEdge {
                target: 1,
                weight: 1.0,
                sign: Sign::Positive
            }]
        );
    }

    #[test]
    fn zero_weight_and_duplicates_rejected() {
        assert_eq!(
            SignedDigraph::from_edge_list(&[(0, 0, 0.0)]).unwrap_err(),
            Error::ZeroWeightEdge { src: 0, dst: 0 }
        );
        assert_eq!(
            SignedDigraph::from_edge_list(&[(0, 0, 1.0), (0, 0, -1.0)]).unwrap_err(),
            Error::DuplicateEdge { src: 0, dst: 0 }
        );
    }

    #[test]
    fn ground_vector_mixed_row() {
        let g = SignedDigraph::from_edge_list(&[
            (0, 1, 1.0),
            (0, 2, -1.0),
            (0, 3, -2.0),
            (1, 0, 1.0),
            (2, 0, 1.0),
            (3, 0, 1.0),
        ])
        .unwrap();
        assert_eq!(g.ground_vector()[0], 0.75);
    }

    #[test]
    fn row_sums_of_pure_graphs() {
        let pos =
            SignedDigraph::from_edge_list(&[(0, 1, 2.0), (0, 2, 1.0), (1, 0, 1.0), (2, 1, 5.0)])
                .unwrap();
        let ones = vec![1.0; 3];
        assert!(close(&pos.apply_p(&ones), &ones, 1e-12));
        let neg = pos.negate_signs();
        assert!(close(&neg.apply_p(&ones), &[-1.0; 3], 1e-12));
        assert_eq!(neg.ground_vector(), vec![1.0; 3]);
    }

    #[test]
    fn transpose_of_zero_is_zero() {
        let g = SignedDigraph::from_edge_list(&[(0, 1, -1.0), (1, 0, 1.0)]).unwrap();
        assert_eq!(g.apply_p_transpose(&[0.0, 0.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn negate_is_involution() {
        let g = SignedDigraph::from_edge_list(&[(0, 1, -1.5), (1, 0, 1.0), (1, 1, -0.5)]).unwrap();
        assert_eq!(g.negate_signs().negate_signs(), g);
        g.check_invariants().unwrap();
    }
}
