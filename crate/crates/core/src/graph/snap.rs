//! SNAP-style signed edge lists: `src dst sign` per line, `#` comments.
//!
//! The sign column may be any nonzero integer (taken as a unit-weight edge
//! of that sign) or a decimal number (taken as the signed weight itself).
//! Node ids are compacted to `0..n` in order of first appearance.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::{BuildOptions, SignedDigraph};
use crate::error::{Error, Result};

/// Counts taken from the edge lines as written, before any repair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SnapStats {
    pub nodes: usize,
    pub edges: usize,
    pub positive_edges: usize,
    pub negative_edges: usize,
    pub self_loops: usize,
}

#[derive(Clone, Debug)]
pub struct ParsedSnap {
    pub graph: SignedDigraph,
    /// `remap[compact_id]` is the id used in the file.
    pub remap: Vec<u64>,
    pub stats: SnapStats,
}

pub fn parse_snap(text: &str, options: BuildOptions) -> Result<ParsedSnap> {
    let (edges, remap, stats) = parse_edges(text)?;
    let graph = SignedDigraph::from_edges(remap.len(), &edges, options)?;
    Ok(ParsedSnap {
        graph,
        remap,
        stats,
    })
}

/// Reads only the statistics; graph invariants (dangling nodes, duplicate
/// edges) are not checked.
pub fn snap_stats(text: &str) -> Result<SnapStats> {
    parse_edges(text).map(|(_, _, stats)| stats)
}

type ParsedEdges = (Vec<(usize, usize, f64)>, Vec<u64>, SnapStats);

fn parse_edges(text: &str) -> Result<ParsedEdges> {
    let mut ids: HashMap<u64, usize> = HashMap::new();
    let mut remap = Vec::new();
    let mut edges = Vec::new();
    let mut stats = SnapStats::default();

    let mut intern = |raw: u64| -> usize {
        *ids.entry(raw).or_insert_with(|| {
            remap.push(raw);
            remap.len() - 1
        })
    };

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = |reason: &str| Error::MalformedLine {
            line: lineno,
            reason: reason.to_string(),
        };
        let mut fields = line.split_whitespace();
        let (Some(src), Some(dst), Some(sign)) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(malformed("expected `src dst sign`"));
        };
        if fields.next().is_some() {
            return Err(malformed("trailing fields"));
        }
        let src: u64 = src.parse().map_err(|_| malformed("bad source id"))?;
        let dst: u64 = dst.parse().map_err(|_| malformed("bad target id"))?;
        let weight = parse_weight(sign).ok_or_else(|| malformed("bad sign"))?;

        let s = intern(src);
        let d = intern(dst);
        stats.edges += 1;
        if weight < 0.0 {
            stats.negative_edges += 1;
        } else {
            stats.positive_edges += 1;
        }
        if s == d {
            stats.self_loops += 1;
        }
        edges.push((s, d, weight));
    }
    stats.nodes = remap.len();
    Ok((edges, remap, stats))
}

fn parse_weight(token: &str) -> Option<f64> {
    if let Ok(sign) = token.parse::<i64>() {
        return match sign.signum() {
            0 => None,
            s => Some(s as f64),
        };
    }
    token
        .parse::<f64>()
        .ok()
        .filter(|w| *w != 0.0 && w.is_finite())
}

/// Writes a graph in the format [`parse_snap`] reads. Unit weights are
/// written as `1`/`-1`; other weights keep a decimal point so they parse
/// back as weights rather than signs.
pub fn serialize_snap(g: &SignedDigraph) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# signed digraph: {} nodes, {} edges",
        g.node_count(),
        g.edge_count()
    );
    for (src, e) in g.edges() {
        if e.weight == 1.0 {
            let _ = writeln!(out, "{}\t{}\t{}", src, e.target, e.sign.value() as i64);
        } else {
            let _ = writeln!(out, "{}\t{}\t{:?}", src, e.target, e.signed_weight());
        }
    }
    out
}

impl SignedDigraph {
    /// Renames node `i` to `new_id[i]`.
    pub fn relabel(&self, new_id: &[usize]) -> Result<SignedDigraph> {
        let n = self.node_count();
        if new_id.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: new_id.len(),
            });
        }
        let edges: Vec<_> = self
            .edges()
            .map(|(s, e)| (new_id[s], new_id[e.target], e.signed_weight()))
            .collect();
        SignedDigraph::from_edges(n, &edges, BuildOptions::default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_signs() {
        let p = parse_snap("# comment\n0 1 -1\n1 0 1", BuildOptions::default()).unwrap();
        assert_eq!(p.graph.node_count(), 2);
        assert_eq!(p.graph.edge_count(), 2);
        assert_eq!(p.graph.negative_edge_count(), 1);
        assert_eq!(
            p.stats,
            SnapStats {
                nodes: 2,
                edges: 2,
                positive_edges: 1,
                negative_edges: 1,
                self_loops: 0
            }
        );
    }

    #[test]
    fn compacts_in_first_appearance_order() {
        let p = parse_snap("7\t3\t1\n3 9 -5\n9 7 +1\n", BuildOptions::default()).unwrap();
        assert_eq!(p.remap, vec![7, 3, 9]);
        assert_eq!(
            p.graph.to_edge_list(),
            vec![(0, 1, 1.0), (1, 2, -1.0), (2, 0, 1.0)]
        );
    }

    #[test]
    fn reports_malformed_line_number() {
        let err = parse_snap("# x\n0 1 1\n0 2\n", BuildOptions::default()).unwrap_err();
        assert!(matches!(err, Error::MalformedLine { line: 3, .. }));
        let err = parse_snap("0 1 0\n", BuildOptions::default()).unwrap_err();
        assert!(matches!(err, Error::MalformedLine { line: 1, .. }));
        let err = parse_snap("a 1 1\n", BuildOptions::default()).unwrap_err();
        assert!(matches!(err, Error::MalformedLine { line: 1, .. }));
    }

    #[test]
    fn dangling_targets_need_repair() {
        let text = "0 1 1\n0 2 -1\n1 0 1\n";
        assert_eq!(
            parse_snap(text, BuildOptions::default()).unwrap_err(),
            Error::DanglingNode { node: 2 }
        );
        let p = parse_snap(
            text,
            BuildOptions {
                repair_dangling: true,
            },
        )
        .unwrap();
        assert_eq!(p.graph.edge_count(), 4);
        assert_eq!(p.stats.edges, 3);
        assert_eq!(snap_stats(text).unwrap().negative_edges, 1);
    }

    #[test]
    fn weighted_round_trip() {
        let g = SignedDigraph::from_edge_list(&[(0, 1, -2.0), (1, 0, 1.0), (0, 0, 0.25)]).unwrap();
        let p = parse_snap(&serialize_snap(&g), BuildOptions::default()).unwrap();
        let ids: Vec<usize> = p.remap.iter().map(|&r| r as usize).collect();
        assert_eq!(p.graph.relabel(&ids).unwrap(), g);
    }
}
