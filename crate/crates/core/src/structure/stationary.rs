use nalgebra::{DMatrix, DVector};

use super::balance::Induced;
use crate::error::{Error, Result};
use crate::graph::SignedDigraph;

/// Per-entry change at which power iteration stops.
pub const POWER_TOLERANCE: f64 = 1e-12;
/// Largest accepted `‖πᵀP̄ − πᵀ‖∞`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;
/// Components up to this size fall back to a dense solve.
pub const DIRECT_SOLVE_LIMIT: usize = 2000;

/// Power-iteration budget `10·n·ln n`, never below 100.
pub fn iteration_cap(n: usize) -> usize {
    let n = n as f64;
    ((10.0 * n * n.ln()).ceil() as usize).max(100)
}

/// Stationary distribution of the unsigned walk restricted to `nodes`,
/// aligned with `nodes`. Edges leaving the set are ignored and rows are
/// renormalized over the remaining ones, which changes nothing for a sink.
pub fn stationary(nodes: &[usize], g: &SignedDigraph) -> Result<Vec<f64>> {
    let sub = Induced::new(nodes, g);
    let n = sub.len;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut row_weight = vec![0.0; n];
    for &(u, _, _, w) in &sub.edges {
        row_weight[u] += w;
    }
    // transition entries (u, v, p_uv)
    let transitions: Vec<(usize, usize, f64)> = sub
        .edges
        .iter()
        .map(|&(u, v, _, w)| (u, v, w / row_weight[u]))
        .collect();

    let apply = |pi: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; n];
        for &(u, v, p) in &transitions {
            out[v] += pi[u] * p;
        }
        out
    };
    let residual = |pi: &[f64]| -> f64 {
        apply(pi)
            .iter()
            .zip(pi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };

    let cap = iteration_cap(n);
    let mut pi = vec![1.0 / n as f64; n];
    let mut converged = false;
    for _ in 0..cap {
        let next = apply(&pi);
        let change = next
            .iter()
            .zip(&pi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        pi = next;
        if change <= POWER_TOLERANCE {
            converged = true;
            break;
        }
    }
    if converged {
        normalize(&mut pi);
        if residual(&pi) <= RESIDUAL_TOLERANCE {
            return Ok(pi);
        }
    }

    if n <= DIRECT_SOLVE_LIMIT {
        let mut direct = direct_solve(n, &transitions).ok_or(Error::NoConvergence {
            iterations: cap,
            residual: f64::NAN,
        })?;
        for p in &mut direct {
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        normalize(&mut direct);
        let r = residual(&direct);
        if r <= RESIDUAL_TOLERANCE {
            return Ok(direct);
        }
        return Err(Error::NoConvergence {
            iterations: cap,
            residual: r,
        });
    }

    normalize(&mut pi);
    Err(Error::NoConvergence {
        iterations: cap,
        residual: residual(&pi),
    })
}

fn normalize(pi: &mut [f64]) {
    let s: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|p| *p /= s);
}

/// Solves `(P̄ᵀ − I)π = 0` with the last equation replaced by `Σπ = 1`.
fn direct_solve(n: usize, transitions: &[(usize, usize, f64)]) -> Option<Vec<f64>> {
    let mut a = DMatrix::<f64>::zeros(n, n);
    for &(u, v, p) in transitions {
        a[(v, u)] += p;
    }
    for i in 0..n {
        a[(i, i)] -= 1.0;
    }
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(n);
    b[n - 1] = 1.0;
    a.lu().solve(&b).map(|x| x.iter().copied().collect())
}
