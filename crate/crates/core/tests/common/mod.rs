// SPDX-License-Identifier: Apache-2.0

//! Brute-force oracles shared by the integration suites. None of these go
//! through the library's search code.

#![allow(dead_code)]

use gridfree::hypergraph::{Edge, Hypergraph3};
use gridfree::lemma::LemmaInstance;
use gridfree::Rational;

fn meet(a: &Edge, b: &Edge) -> usize {
    a.iter().filter(|v| b.contains(v)).count()
}

/// Smallest (rows, cols) split of six sorted edge indices into a 3×3 grid,
/// with the smallest index among the rows.
fn grid_split(e: &[Edge], six: [usize; 6]) -> Option<([usize; 3], [usize; 3])> {
    let mut best = None;
    for i in 1..6 {
        for j in i + 1..6 {
            let rows = [six[0], six[i], six[j]];
            let rest: Vec<usize> = (1..6)
                .filter(|&k| k != i && k != j)
                .map(|k| six[k])
                .collect();
            let cols = [rest[0], rest[1], rest[2]];
            let disjoint = |es: &[usize; 3]| {
                (0..3).all(|a| (a + 1..3).all(|b| meet(&e[es[a]], &e[es[b]]) == 0))
            };
            let crossing = rows
                .iter()
                .all(|&r| cols.iter().all(|&c| meet(&e[r], &e[c]) == 1));
            if disjoint(&rows)
                && disjoint(&cols)
                && crossing
                && best.is_none_or(|b| (rows, cols) < b)
            {
                best = Some((rows, cols));
            }
        }
    }
    best
}

/// Lexicographically smallest grid (rows, then columns) over all 6-subsets.
pub fn naive_min_grid(h: &Hypergraph3) -> Option<([usize; 3], [usize; 3])> {
    let e = h.edges();
    let m = e.len();
    if m < 6 {
        return None;
    }
    let mut idx = [0usize, 1, 2, 3, 4, 5];
    let mut best: Option<([usize; 3], [usize; 3])> = None;
    loop {
        if let Some(found) = grid_split(e, idx) {
            if best.is_none_or(|b| found < b) {
                best = Some(found);
            }
        }
        // next combination
        let mut k = 5;
        loop {
            if idx[k] < m - 6 + k {
                break;
            }
            if k == 0 {
                return best;
            }
            k -= 1;
        }
        idx[k] += 1;
        for t in k + 1..6 {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

/// Whether any six edges of `h` form a 3×3 grid.
pub fn naive_has_grid(h: &Hypergraph3) -> bool {
    naive_min_grid(h).is_some()
}

/// Mean coverage over all size-k subsets, by enumeration.
pub fn exhaustive_average(inst: &LemmaInstance) -> Rational {
    let (n, k) = (inst.n(), inst.k());
    let (mut total, mut count) = (0i128, 0i128);
    for mask in 0u64..1 << n {
        if mask.count_ones() as usize != k {
            continue;
        }
        count += 1;
        total += inst
            .pairs()
            .iter()
            .filter(|&&(a, b)| mask & (1 << a) != 0 || mask & (1 << b) != 0)
            .count() as i128;
    }
    Rational::new(total, count)
}

/// Pairwise O(m^2) linearity test.
pub fn naive_is_linear(h: &Hypergraph3) -> bool {
    let e = h.edges();
    (0..e.len()).all(|i| (i + 1..e.len()).all(|j| meet(&e[i], &e[j]) <= 1))
}
