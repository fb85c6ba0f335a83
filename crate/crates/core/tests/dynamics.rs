#![allow(clippy::needless_range_loop)]
mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use signed_voter::dynamics::{
    oscillation_amplitude, propagate, run_to_horizon, solve_u, steady_state, Coupling, SteadyKind,
    SETTLE_TOLERANCE,
};
use signed_voter::error::Error;
use signed_voter::graph::{generate, ColorDistribution, GeneratorConfig};
use signed_voter::structure::{classify_balance, decompose};

fn dist(x: &[f64]) -> ColorDistribution {
    ColorDistribution::new(x.to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn even_steps_ignore_sign_negation(seed in any::<u64>(), n in 1usize..100) {
        let mut r = rng(seed);
        let edges = arbitrary(&mut r, n);
        let g = build(n, &edges);
        let x0 = dist(&random_x0(&mut r, n));
        let a = propagate(&g, &x0, 100).unwrap();
        let b = propagate(&g.negate_signs(), &x0, 100).unwrap();
        for t in (0..=100).step_by(2) {
            prop_assert!(max_abs_diff(a[t].as_slice(), b[t].as_slice()) <= 1e-10, "t = {}", t);
        }
    }

    #[test]
    fn propagation_matches_dense_and_stays_in_range(seed in any::<u64>(), n in 1usize..30) {
        let mut r = rng(seed);
        let edges = arbitrary(&mut r, n);
        let g = build(n, &edges);
        let x0 = random_x0(&mut r, n);
        let fast = propagate(&g, &dist(&x0), 40).unwrap();
        let slow = Dense::new(n, &edges).propagate(&x0, 40);
        prop_assert_eq!(fast.len(), 41);
        for (a, b) in fast.iter().zip(&slow) {
            prop_assert!(max_abs_diff(a.as_slice(), b) <= 1e-10);
            prop_assert!(a.as_slice().iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}

#[test]
fn coupling_matches_dense_inverse() {
    for seed in 0..20 {
        let mut r = rng(500 + seed);
        let classes = [
            (Class::Balanced, 4),
            (Class::AntiBalanced, 5),
            (Class::Balanced, 3),
        ];
        let (n, edges) = weakly_connected(&mut r, 8, &classes, 2);
        assert_eq!(n, 20);
        let g = build(n, &edges);
        let d = decompose(&g);
        let dense = Dense::new(n, &edges);
        let x = d.non_sink().to_vec();
        for sink in 0..d.sink_count() {
            let nodes = d.sink_nodes(sink);
            let class = classify_balance(nodes, &g).unwrap();
            let p = class.partition().unwrap();
            let b: Vec<f64> = x
                .iter()
                .map(|&i| {
                    nodes
                        .iter()
                        .enumerate()
                        .map(|(l, &j)| dense.p[i][j] * p.sign(l))
                        .sum()
                })
                .collect();
            for (mode, sign) in [(Coupling::Balanced, -1.0), (Coupling::AntiBalanced, 1.0)] {
                let mut m = identity(x.len());
                for (a, &i) in x.iter().enumerate() {
                    for (c, &j) in x.iter().enumerate() {
                        m[a][c] += sign * dense.p[i][j];
                    }
                }
                let want = gauss_solve(&m, &b);
                let got = solve_u(&g, &d, sink, p, mode).unwrap();
                assert!(max_abs_diff(&got, &want) <= 1e-9, "seed {seed} sink {sink}");
            }
        }
    }
}

#[test]
fn single_non_sink_node_couplings() {
    // node 0 feeds the balanced sink {1, 2}
    for (sign, expected) in [(1.0, 1.0), (-1.0, -1.0)] {
        let g = build(3, &[(0, 1, sign), (1, 2, 1.0), (2, 1, 1.0), (1, 1, 1.0)]);
        let d = decompose(&g);
        let class = classify_balance(d.sink_nodes(0), &g).unwrap();
        let u = solve_u(&g, &d, 0, class.partition().unwrap(), Coupling::Balanced).unwrap();
        assert_eq!(u, vec![expected]);
    }
}

#[test]
fn balanced_sink_from_all_black() {
    let mut r = rng(77);
    let (n, edges) = weakly_connected(&mut r, 20, &[(Class::Balanced, 30)], 3);
    assert_eq!(n, 50);
    let g = build(n, &edges);
    let dense = Dense::new(n, &edges);
    let d = decompose(&g);
    let z = d.sink_nodes(0).to_vec();
    let x: Vec<usize> = (0..20).collect();
    assert_eq!(d.non_sink(), x.as_slice());
    let p = classify_balance(&z, &g)
        .unwrap()
        .partition()
        .unwrap()
        .clone();
    let pi = dense.stationary(&z);

    // closed form with an independent dense coupling solve
    let s: f64 = z
        .iter()
        .enumerate()
        .map(|(l, _)| -0.5 * p.sign(l) * pi[l])
        .sum();
    let mut m = identity(20);
    for &i in &x {
        for &j in &x {
            m[i][j] -= dense.p[i][j];
        }
    }
    let b: Vec<f64> = x
        .iter()
        .map(|&i| {
            z.iter()
                .enumerate()
                .map(|(l, &j)| dense.p[i][j] * p.sign(l))
                .sum()
        })
        .collect();
    let u = gauss_solve(&m, &b);
    let mut expected = vec![0.0; n];
    for &i in &x {
        expected[i] = 0.5 + u[i] * s;
    }
    for (l, &j) in z.iter().enumerate() {
        expected[j] = 0.5 + p.sign(l) * s;
    }

    let steady = steady_state(&g, &ColorDistribution::zeros(n)).unwrap();
    assert_eq!(steady.kind, SteadyKind::Fixed);
    assert!(max_abs_diff(steady.x().as_slice(), &expected) <= 1e-9);
    let long = dense.propagate(&vec![0.0; n], 500);
    assert!(max_abs_diff(steady.x().as_slice(), &long[500]) <= 1e-6);
}

#[test]
fn fixed_steady_states_match_long_propagation() {
    for seed in 0..25 {
        let mut r = rng(900 + seed);
        let classes: Vec<(Class, usize)> = (0..r.random_range(1..=3))
            .map(|_| {
                let class = if r.random_bool(0.5) {
                    Class::Balanced
                } else {
                    Class::StrictlyUnbalanced
                };
                (class, r.random_range(2..=15))
            })
            .collect();
        let nx = r.random_range(0..=15);
        let (n, edges) = weakly_connected(&mut r, nx, &classes, 3);
        let g = build(n, &edges);
        let x0 = dist(&random_x0(&mut r, n));
        let steady = steady_state(&g, &x0).unwrap();
        assert_ne!(steady.kind, SteadyKind::Oscillating);
        let settled = run_to_horizon(&g, &x0, SETTLE_TOLERANCE, 1_000_000).unwrap();
        assert!(
            max_abs_diff(&settled.even, steady.x().as_slice()) <= 1e-6,
            "seed {seed}"
        );
    }
}

#[test]
fn anti_balanced_amplitude_matches_propagation() {
    // six-node anti-balanced instance, against 400/401 dense steps
    let mut r = rng(6);
    let edges = ergodic_block(&mut r, 0, 6, 8, Class::AntiBalanced);
    let g = build(6, &edges);
    for trial in 0..10 {
        let x0 = random_x0(&mut rng(trial), 6);
        let steady = steady_state(&g, &dist(&x0)).unwrap();
        assert_eq!(steady.kind, SteadyKind::Oscillating);
        let traj = Dense::new(6, &edges).propagate(&x0, 401);
        let even: f64 = traj[400].iter().sum();
        let odd: f64 = traj[401].iter().sum();
        let amp = oscillation_amplitude(&steady).unwrap();
        assert!((amp - (even - odd).abs() / 2.0).abs() <= 1e-9);
        assert!(max_abs_diff(steady.even.as_slice(), &traj[400]) <= 1e-9);
        assert!(max_abs_diff(steady.odd.as_slice(), &traj[401]) <= 1e-9);
    }
}

#[test]
fn amplitude_from_indicator_of_s() {
    for seed in 0..10 {
        let mut r = rng(40 + seed);
        let n = r.random_range(3..20);
        let edges = ergodic_block(&mut r, 0, n, 2 * n, Class::AntiBalanced);
        let g = build(n, &edges);
        let nodes: Vec<usize> = (0..n).collect();
        let p = classify_balance(&nodes, &g)
            .unwrap()
            .partition()
            .unwrap()
            .clone();
        let x0: Vec<f64> = (0..n).map(|v| if p.in_s(v) { 1.0 } else { 0.0 }).collect();
        let pi = Dense::new(n, &edges).stationary(&nodes);
        let inner: f64 = (0..n).map(|v| p.sign(v) * pi[v] * (x0[v] - 0.5)).sum();
        let sizes = (p.size_s() as f64 - p.size_s_bar() as f64).abs();
        let steady = steady_state(&g, &dist(&x0)).unwrap();
        let amp = oscillation_amplitude(&steady).unwrap();
        assert!((amp - sizes * inner.abs()).abs() <= 1e-10);
    }
}

#[test]
fn equal_parities_have_no_amplitude() {
    let g = build(2, &[(0, 1, 1.0), (1, 0, 1.0), (0, 0, 1.0)]);
    let steady = steady_state(&g, &dist(&[1.0, 0.0])).unwrap();
    assert!(matches!(
        oscillation_amplitude(&steady),
        Err(Error::WrongKind { .. })
    ));
}

#[test]
fn slow_mixing_hits_the_cap() {
    let g = generate(&GeneratorConfig::slow_mixing(12)).unwrap();
    let x0 = ColorDistribution::from_seeds(24, &[0]).unwrap();
    match run_to_horizon(&g, &x0, SETTLE_TOLERANCE, 500) {
        Err(e @ Error::SlowMixing { .. }) => assert!(e.is_numeric()),
        other => panic!("expected SlowMixing, got {other:?}"),
    }
}

#[test]
fn centered_powers_of_ergodic_chain() {
    // (P̄ − 1πᵀ)ᵗ = P̄ᵗ − 1πᵀ
    for seed in 0..10 {
        let mut r = rng(1200 + seed);
        let n = r.random_range(2..=12);
        let class = random_class(&mut r);
        let edges = ergodic_block(&mut r, 0, n, n, class);
        let d = Dense::new(n, &edges);
        let nodes: Vec<usize> = (0..n).collect();
        let pi = d.stationary(&nodes);
        let ones_pi: Mat = (0..n).map(|_| pi.clone()).collect();
        let centered = add(&d.pbar, &ones_pi, -1.0);
        let mut lhs = identity(n);
        let mut power = identity(n);
        for t in 1..=10 {
            lhs = matmul(&lhs, &centered);
            power = matmul(&power, &d.pbar);
            let rhs = add(&power, &ones_pi, -1.0);
            assert!(
                max_norm(&add(&lhs, &rhs, -1.0)) <= 1e-10,
                "seed {seed} t {t}"
            );
        }
    }
}

#[test]
fn block_series_vanish_and_sum_to_inverse() {
    // Σ_{i<t} Xⁱ Y Z^{t−1−i} → 0 and Σ Xⁱ → (I − X)⁻¹ for spectral radii below one
    for seed in 0..10 {
        let mut r = rng(1300 + seed);
        let n = r.random_range(2..=8);
        let block = |r: &mut rand_chacha::ChaCha8Rng, scale: f64| -> Mat {
            (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| r.random_range(-1.0..1.0) * scale / n as f64)
                        .collect()
                })
                .collect()
        };
        let x = block(&mut r, 0.5);
        let y = block(&mut r, 1.0);
        let z = block(&mut r, 0.5);

        let mut norms = Vec::new();
        let mut x_pow = vec![identity(n)];
        let mut z_pow = vec![identity(n)];
        for t in 1..=60 {
            x_pow.push(matmul(&x_pow[t - 1], &x));
            z_pow.push(matmul(&z_pow[t - 1], &z));
            let mut sum = zeros(n, n);
            for i in 0..t {
                sum = add(
                    &sum,
                    &matmul(&matmul(&x_pow[i], &y), &z_pow[t - 1 - i]),
                    1.0,
                );
            }
            norms.push(max_norm(&sum));
        }
        let burn_in = 10;
        for w in norms[burn_in..].windows(2) {
            assert!(w[1] <= w[0] + 1e-15, "seed {seed}: {norms:?}");
        }
        assert!(*norms.last().unwrap() <= 1e-3);

        let mut series = zeros(n, n);
        for p in &x_pow {
            series = add(&series, p, 1.0);
        }
        let inv = inverse(&add(&identity(n), &x, -1.0));
        assert!(max_norm(&add(&series, &inv, -1.0)) <= 1e-8);
    }
}
