// SPDX-License-Identifier: Apache-2.0

//! Searches for small configurations: the 3×3 grid, the prism, the 2-core
//! and bounded 2-cores.
//!
//! Every search returns the lexicographically smallest witness, so results
//! do not depend on how the work was scheduled.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::fixtures::PRISM_EDGES;
use crate::hypergraph::{degrees, Edge, Hypergraph3};
use crate::par::{self, Exec};

/// Largest vertex budget accepted by [`find_small_two_core`].
pub const MAX_CORE_VERTICES: usize = 10;
pub const MIN_CORE_VERTICES: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetectError {
    #[error("vertex budget {0} is outside [{MIN_CORE_VERTICES}, {MAX_CORE_VERTICES}]")]
    BadBudget(usize),
}

/// Three pairwise-disjoint rows and three pairwise-disjoint columns, each
/// row meeting each column in exactly one vertex. Indices refer to
/// `h.edges()`; `rows` is the parallel class with the smaller sorted
/// index triple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GridWitness {
    pub rows: [usize; 3],
    pub cols: [usize; 3],
    pub vertices: [usize; 9],
}

impl GridWitness {
    /// Re-checks the witness against `h` from scratch.
    pub fn is_valid_in(&self, h: &Hypergraph3) -> bool {
        let edges = h.edges();
        let all = self.rows.iter().chain(&self.cols);
        if all.clone().any(|&i| i >= edges.len()) {
            return false;
        }
        let mut idx: Vec<usize> = all.copied().collect();
        idx.sort_unstable();
        idx.dedup();
        if idx.len() != 6 {
            return false;
        }
        let rows = self.rows.map(|i| edges[i]);
        let cols = self.cols.map(|i| edges[i]);
        let pairwise_disjoint =
            |es: &[Edge; 3]| (0..3).all(|a| (a + 1..3).all(|b| common(&es[a], &es[b]) == 0));
        if !pairwise_disjoint(&rows) || !pairwise_disjoint(&cols) {
            return false;
        }
        if !rows.iter().all(|r| cols.iter().all(|c| common(r, c) == 1)) {
            return false;
        }
        let mut verts: Vec<usize> = rows.iter().flatten().copied().collect();
        verts.sort_unstable();
        let mut col_verts: Vec<usize> = cols.iter().flatten().copied().collect();
        col_verts.sort_unstable();
        verts == col_verts && verts == self.vertices
    }
}

/// A sub-edge-set in which every covered vertex has degree at least 2.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CoreWitness {
    pub edges: Vec<usize>,
    pub vertices: Vec<usize>,
    pub degrees: Vec<usize>,
}

impl CoreWitness {
    fn from_edges(h: &Hypergraph3, mut edges: Vec<usize>) -> Self {
        edges.sort_unstable();
        let mut vertices: Vec<usize> = edges.iter().flat_map(|&i| h.edges()[i]).collect();
        vertices.sort_unstable();
        let mut degrees = Vec::new();
        let mut uniq = Vec::new();
        for chunk in vertices.chunk_by(|a, b| a == b) {
            uniq.push(chunk[0]);
            degrees.push(chunk.len());
        }
        CoreWitness {
            edges,
            vertices: uniq,
            degrees,
        }
    }

    pub fn min_degree(&self) -> usize {
        self.degrees.iter().copied().min().unwrap_or(0)
    }
}

#[inline]
fn common(a: &Edge, b: &Edge) -> usize {
    a.iter().filter(|v| b.contains(v)).count()
}

pub fn find_grid(h: &Hypergraph3) -> Option<GridWitness> {
    find_grid_with(h, Exec::default())
}

/// Branches over the first row in parallel; within a branch rows are tried
/// in lexicographic order, so the first hit in index order is the minimum.
pub fn find_grid_with(h: &Hypergraph3, exec: Exec) -> Option<GridWitness> {
    let edges = h.edges();
    let inc = h.incidence();
    par::find_map_first(exec, edges.len(), |i| grid_from_first_row(edges, &inc, i))
}

fn grid_from_first_row(edges: &[Edge], inc: &[Vec<usize>], i: usize) -> Option<GridWitness> {
    let r0 = edges[i];
    // Columns pass through one vertex of the first row each and have
    // indices above i (the column class has the larger minimum index).
    let through: [Vec<usize>; 3] = r0.map(|v| {
        inc[v]
            .iter()
            .copied()
            .filter(|&c| c > i && common(&edges[c], &r0) == 1)
            .collect()
    });
    let mut best: Option<([usize; 2], [usize; 3])> = None;
    for &a in &through[0] {
        // the other two rows each cross column a away from the first row
        let mut from_a: Vec<usize> = edges[a]
            .iter()
            .filter(|v| !r0.contains(v))
            .flat_map(|&v| inc[v].iter().copied())
            .filter(|&e| e > i && common(&edges[e], &r0) == 0 && common(&edges[e], &edges[a]) == 1)
            .collect();
        from_a.sort_unstable();
        from_a.dedup();
        if from_a.len() < 2 {
            continue;
        }
        for &b in &through[1] {
            if common(&edges[a], &edges[b]) != 0 {
                continue;
            }
            let from_ab: Vec<usize> = from_a
                .iter()
                .copied()
                .filter(|&e| common(&edges[e], &edges[b]) == 1)
                .collect();
            if from_ab.len() < 2 {
                continue;
            }
            for &c in &through[2] {
                if common(&edges[a], &edges[c]) != 0 || common(&edges[b], &edges[c]) != 0 {
                    continue;
                }
                let rows: Vec<usize> = from_ab
                    .iter()
                    .copied()
                    .filter(|&e| common(&edges[e], &edges[c]) == 1)
                    .collect();
                let pair = rows.iter().enumerate().find_map(|(x, &j)| {
                    rows[x + 1..]
                        .iter()
                        .find(|&&l| common(&edges[j], &edges[l]) == 0)
                        .map(|&l| [j, l])
                });
                if let Some(pair) = pair {
                    let mut cols = [a, b, c];
                    cols.sort_unstable();
                    if best.is_none_or(|bst| (pair, cols) < bst) {
                        best = Some((pair, cols));
                    }
                }
            }
        }
    }
    let ([j, l], cols) = best?;
    let mut vertices = [0usize; 9];
    for (slot, v) in vertices
        .iter_mut()
        .zip(r0.iter().chain(&edges[j]).chain(&edges[l]))
    {
        *slot = *v;
    }
    vertices.sort_unstable();
    Some(GridWitness {
        rows: [i, j, l],
        cols,
        vertices,
    })
}

/// Finds a copy (not necessarily induced) of a connected pattern and
/// returns the smallest sorted list of host edge indices.
///
/// `pattern` must be ordered so every edge after the first shares a vertex
/// with an earlier one.
pub fn find_pattern_with(h: &Hypergraph3, pattern: &[Edge], exec: Exec) -> Option<Vec<usize>> {
    let pn = pattern.iter().flatten().max().map_or(0, |v| v + 1);
    let inc = h.incidence();
    let search = PatternSearch {
        host: h.edges(),
        inc: &inc,
        pattern,
    };
    par::min_over(exec, h.m(), |first| {
        let mut state = MatchState {
            map: vec![usize::MAX; pn],
            used_vertex: vec![false; h.n()],
            chosen: Vec::with_capacity(pattern.len()),
            best: None,
        };
        search.assign(0, first, &mut state);
        state.best
    })
}

struct PatternSearch<'a> {
    host: &'a [Edge],
    inc: &'a [Vec<usize>],
    pattern: &'a [Edge],
}

struct MatchState {
    map: Vec<usize>,
    used_vertex: Vec<bool>,
    chosen: Vec<usize>,
    best: Option<Vec<usize>>,
}

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

impl PatternSearch<'_> {
    fn extend(&self, depth: usize, state: &mut MatchState) {
        if depth == self.pattern.len() {
            let mut found = state.chosen.clone();
            found.sort_unstable();
            if state.best.as_ref().is_none_or(|b| found < *b) {
                state.best = Some(found);
            }
            return;
        }
        let anchor = self.pattern[depth]
            .iter()
            .map(|&v| state.map[v])
            .find(|&hv| hv != usize::MAX)
            .expect("pattern edges are ordered to stay connected");
        for &cand in &self.inc[anchor] {
            if !state.chosen.contains(&cand) {
                self.assign(depth, cand, state);
            }
        }
    }

    fn assign(&self, depth: usize, host_edge: usize, state: &mut MatchState) {
        let t = self.pattern[depth];
        let e = self.host[host_edge];
        for perm in PERMS {
            let mut fresh = Vec::with_capacity(3);
            let mut ok = true;
            for k in 0..3 {
                let (tv, hv) = (t[k], e[perm[k]]);
                match state.map[tv] {
                    usize::MAX if !state.used_vertex[hv] => {
                        state.map[tv] = hv;
                        state.used_vertex[hv] = true;
                        fresh.push(tv);
                    }
                    mapped if mapped == hv => {}
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                state.chosen.push(host_edge);
                self.extend(depth + 1, state);
                state.chosen.pop();
            }
            for tv in fresh {
                state.used_vertex[state.map[tv]] = false;
                state.map[tv] = usize::MAX;
            }
        }
    }
}

// Pattern order keeps each edge attached to an earlier one.
const PRISM_SEARCH_ORDER: [usize; 6] = [0, 1, 4, 2, 5, 3];

pub fn find_prism(h: &Hypergraph3) -> Option<CoreWitness> {
    find_prism_with(h, Exec::default())
}

pub fn find_prism_with(h: &Hypergraph3, exec: Exec) -> Option<CoreWitness> {
    let pattern = PRISM_SEARCH_ORDER.map(|i| PRISM_EDGES[i]);
    find_pattern_with(h, &pattern, exec).map(|edges| CoreWitness::from_edges(h, edges))
}

/// Maximal sub-hypergraph with minimum degree 2 over its covered vertices.
/// Vertex ids and `n` are kept; peeled vertices stay as isolated ids.
pub fn two_core(h: &Hypergraph3) -> Hypergraph3 {
    let order: Vec<usize> = (0..h.n()).collect();
    two_core_with_order(h, &order)
}

/// Peeling that seeds its work queue in the given vertex order.
pub fn two_core_with_order(h: &Hypergraph3, order: &[usize]) -> Hypergraph3 {
    let inc = h.incidence();
    let mut deg = degrees(h);
    let mut alive = vec![true; h.m()];
    let mut queue: VecDeque<usize> = order.iter().copied().filter(|&v| deg[v] == 1).collect();
    while let Some(v) = queue.pop_front() {
        if deg[v] == 0 {
            continue;
        }
        for &ei in &inc[v] {
            if !alive[ei] {
                continue;
            }
            alive[ei] = false;
            for &u in &h.edges()[ei] {
                deg[u] -= 1;
                if deg[u] == 1 {
                    queue.push_back(u);
                }
            }
        }
    }
    h.restrict_edges((0..h.m()).filter(|&i| alive[i]))
}

/// Smallest (lexicographic by sorted edge indices) edge set spanning at
/// most `max_vertices` vertices in which every covered vertex has degree
/// at least 2. Exponential in the worst case.
pub fn find_small_two_core(
    h: &Hypergraph3,
    max_vertices: usize,
) -> Result<Option<CoreWitness>, DetectError> {
    find_small_two_core_with(h, max_vertices, Exec::default())
}

pub fn find_small_two_core_with(
    h: &Hypergraph3,
    max_vertices: usize,
    exec: Exec,
) -> Result<Option<CoreWitness>, DetectError> {
    if !(MIN_CORE_VERTICES..=MAX_CORE_VERTICES).contains(&max_vertices) {
        return Err(DetectError::BadBudget(max_vertices));
    }
    let found = par::find_map_first(exec, h.m(), |first| {
        let mut s = CoreSearch {
            edges: h.edges(),
            budget: max_vertices,
            count: vec![0u8; h.n()],
            covered: 0,
            deficient: 0,
            chosen: Vec::new(),
        };
        s.push(first);
        let hit = s.dfs(first + 1);
        hit.then(|| s.chosen.clone())
    });
    Ok(found.map(|edges| CoreWitness::from_edges(h, edges)))
}

struct CoreSearch<'a> {
    edges: &'a [Edge],
    budget: usize,
    count: Vec<u8>,
    covered: usize,
    deficient: usize,
    chosen: Vec<usize>,
}

impl CoreSearch<'_> {
    fn new_vertices(&self, i: usize) -> usize {
        self.edges[i]
            .iter()
            .filter(|&&v| self.count[v] == 0)
            .count()
    }

    fn push(&mut self, i: usize) {
        for &v in &self.edges[i] {
            self.count[v] += 1;
            match self.count[v] {
                1 => {
                    self.covered += 1;
                    self.deficient += 1;
                }
                2 => self.deficient -= 1,
                _ => {}
            }
        }
        self.chosen.push(i);
    }

    fn pop(&mut self) {
        let i = self.chosen.pop().expect("non-empty");
        for &v in &self.edges[i] {
            match self.count[v] {
                1 => {
                    self.covered -= 1;
                    self.deficient -= 1;
                }
                2 => self.deficient += 1,
                _ => {}
            }
            self.count[v] -= 1;
        }
    }

    /// Pre-order over supersets in increasing index order; the first
    /// complete set found is the lexicographic minimum under this prefix.
    fn dfs(&mut self, next: usize) -> bool {
        if self.deficient == 0 {
            return true;
        }
        for j in next..self.edges.len() {
            if self.covered + self.new_vertices(j) > self.budget {
                continue;
            }
            self.push(j);
            if self.dfs(j + 1) {
                return true;
            }
            self.pop();
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn grid_fixture_witness() {
        let g = fixtures::grid();
        let w = find_grid(&g).unwrap();
        let rows: Vec<Edge> = w.rows.iter().map(|&i| g.edges()[i]).collect();
        let cols: Vec<Edge> = w.cols.iter().map(|&i| g.edges()[i]).collect();
        assert_eq!(rows, vec![[0, 1, 2], [3, 4, 5], [6, 7, 8]]);
        assert_eq!(cols, vec![[0, 3, 6], [1, 4, 7], [2, 5, 8]]);
        assert_eq!(w.vertices, [0, 1, 2, 3, 4, 5, 6, 7, 8]);
        assert!(w.is_valid_in(&g));
    }

    #[test]
    fn prism_has_no_grid_and_grid_has_no_prism() {
        assert_eq!(find_grid(&fixtures::prism()), None);
        assert_eq!(find_prism(&fixtures::grid()), None);
        assert_eq!(find_prism(&Hypergraph3::empty(0)), None);
    }

    #[test]
    fn prism_fixture_found() {
        let w = find_prism(&fixtures::prism()).unwrap();
        assert_eq!(w.edges, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(w.vertices.len(), 9);
        assert_eq!(w.min_degree(), 2);
    }

    #[test]
    fn invalid_witness_rejected() {
        let g = fixtures::grid();
        let mut w = find_grid(&g).unwrap();
        w.cols.swap(0, 1);
        assert!(w.is_valid_in(&g));
        w.cols[0] = w.rows[0];
        assert!(!w.is_valid_in(&g));
    }

    #[test]
    fn two_core_examples() {
        let g = fixtures::grid();
        assert_eq!(two_core(&g), g);
        let single = Hypergraph3::new(3, [[0, 1, 2]]).unwrap();
        assert_eq!(two_core(&single).m(), 0);
        let mut edges = fixtures::GRID_EDGES.to_vec();
        edges.push([4, 9, 10]);
        let pendant = Hypergraph3::new(11, edges).unwrap();
        assert_eq!(two_core(&pendant).edges(), g.edges());
    }

    #[test]
    fn small_core_examples() {
        let w = find_small_two_core(&fixtures::pasch(), 6).unwrap().unwrap();
        assert_eq!(w.edges, vec![0, 1, 2, 3]);
        assert_eq!(w.degrees, vec![2; 6]);
        assert_eq!(find_small_two_core(&fixtures::pasch(), 5).unwrap(), None);
        let three = Hypergraph3::new(9, [[0, 1, 2], [0, 3, 4], [1, 3, 5]]).unwrap();
        assert_eq!(find_small_two_core(&three, 10).unwrap(), None);
        assert_eq!(
            find_small_two_core(&three, 3),
            Err(DetectError::BadBudget(3))
        );
        assert_eq!(
            find_small_two_core(&three, 11),
            Err(DetectError::BadBudget(11))
        );
    }

    #[test]
    fn four_vertex_core() {
        // Without linearity three triples on four points already form a core.
        let k4 = Hypergraph3::new(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap();
        let w = find_small_two_core(&k4, 4).unwrap().unwrap();
        assert_eq!(w.edges, vec![0, 1, 2]);
        assert_eq!(w.degrees, vec![3, 2, 2, 2]);
    }

    #[test]
    fn grid_core_within_nine() {
        let w = find_small_two_core(&fixtures::grid(), 9).unwrap().unwrap();
        assert_eq!(w.edges.len(), 6);
        assert_eq!(find_small_two_core(&fixtures::grid(), 8).unwrap(), None);
    }
}
