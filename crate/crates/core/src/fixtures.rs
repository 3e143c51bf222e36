// SPDX-License-Identifier: Apache-2.0

//! Small named configurations and seeded generators for planted-witness
//! experiments.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::hypergraph::{Edge, Hypergraph3};

/// Rows `{0,1,2},{3,4,5},{6,7,8}` and columns `{0,3,6},{1,4,7},{2,5,8}`.
pub const GRID_EDGES: [Edge; 6] = [
    [0, 1, 2],
    [3, 4, 5],
    [6, 7, 8],
    [0, 3, 6],
    [1, 4, 7],
    [2, 5, 8],
];

/// The prism (double triangle) on labels a..i = 0..8.
pub const PRISM_EDGES: [Edge; 6] = [
    [0, 1, 2],
    [0, 3, 6],
    [2, 5, 8],
    [6, 7, 8],
    [1, 4, 5],
    [3, 4, 7],
];

/// Pasch configuration: six points, four triples, every point twice.
pub const PASCH_EDGES: [Edge; 4] = [[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5]];

pub fn grid() -> Hypergraph3 {
    Hypergraph3::new(9, GRID_EDGES).expect("grid fixture is valid")
}

pub fn prism() -> Hypergraph3 {
    Hypergraph3::new(9, PRISM_EDGES).expect("prism fixture is valid")
}

pub fn pasch() -> Hypergraph3 {
    Hypergraph3::new(6, PASCH_EDGES).expect("pasch fixture is valid")
}

fn below(rng: &mut SplitMix64, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

fn shuffle<T>(rng: &mut SplitMix64, xs: &mut [T]) {
    for i in (1..xs.len()).rev() {
        xs.swap(i, below(rng, i + 1));
    }
}

/// Greedy random linear hypergraph: draws up to `attempts` random triples
/// on `n` vertices and keeps each one that does not reuse a covered pair.
pub fn random_linear(n: usize, max_edges: usize, attempts: usize, seed: u64) -> Hypergraph3 {
    assert!(n >= 3);
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut covered = std::collections::HashSet::new();
    let mut edges = Vec::new();
    for _ in 0..attempts {
        if edges.len() >= max_edges {
            break;
        }
        let mut e = [below(&mut rng, n), below(&mut rng, n), below(&mut rng, n)];
        e.sort_unstable();
        if e[0] == e[1] || e[1] == e[2] {
            continue;
        }
        let pairs = [(e[0], e[1]), (e[0], e[2]), (e[1], e[2])];
        if pairs.iter().any(|p| covered.contains(p)) {
            continue;
        }
        covered.extend(pairs);
        edges.push(e);
    }
    Hypergraph3::new(n, edges).expect("generated edges are valid")
}

/// Embeds `pattern` (a 9-vertex configuration) on randomly chosen vertices
/// of a host with `n` vertices, then adds up to `noise` further random edges
/// that keep the result linear. With `pendant_noise`, every noise edge
/// brings two fresh vertices, so noise never enters the 2-core.
pub fn plant(
    pattern: &[Edge],
    n: usize,
    noise: usize,
    pendant_noise: bool,
    seed: u64,
) -> Hypergraph3 {
    let pattern_n = pattern.iter().flatten().max().map_or(0, |v| v + 1);
    let mut rng = SplitMix64::seed_from_u64(seed);
    let extra = if pendant_noise { 2 * noise } else { 0 };
    let total = n.max(pattern_n) + extra;
    let base_n = total - extra;
    let mut ids: Vec<usize> = (0..base_n).collect();
    shuffle(&mut rng, &mut ids);
    let mut covered = std::collections::HashSet::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut push = |e: Edge, covered: &mut std::collections::HashSet<(usize, usize)>| {
        let mut e = e;
        e.sort_unstable();
        let pairs = [(e[0], e[1]), (e[0], e[2]), (e[1], e[2])];
        if e[0] == e[1] || e[1] == e[2] || pairs.iter().any(|p| covered.contains(p)) {
            return false;
        }
        covered.extend(pairs);
        edges.push(e);
        true
    };
    for e in pattern {
        let ok = push(e.map(|v| ids[v]), &mut covered);
        assert!(ok, "pattern must be linear");
    }
    let mut added = 0;
    let mut fresh = base_n;
    for _ in 0..noise * 50 {
        if added == noise {
            break;
        }
        let e = if pendant_noise {
            [below(&mut rng, fresh), fresh, fresh + 1]
        } else {
            [
                below(&mut rng, total),
                below(&mut rng, total),
                below(&mut rng, total),
            ]
        };
        if push(e, &mut covered) {
            added += 1;
            if pendant_noise {
                fresh += 2;
            }
        }
    }
    Hypergraph3::new(total, edges).expect("planted edges are valid")
}
