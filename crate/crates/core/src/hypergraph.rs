// SPDX-License-Identifier: Apache-2.0

//! 3-uniform hypergraphs in canonical form and the `.hg3` text format.
//!
//! ```text
//! # vertex 0 V1 0 0        <- optional provenance, only before the header
//! 9 6                      <- n m
//! 0 1 2                    <- m edges, ascending ids, sorted lexicographically
//! ...
//! ```
//!
//! Every line, including the last, ends in `\n`.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::ffield::FieldElement;
use crate::geometry::AffinePoint;
use crate::Rational;

pub type Edge = [usize; 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("edge {0:?} repeats a vertex")]
    RepeatedVertex(Edge),
    #[error("edge {edge:?} uses vertex {vertex} but n = {n}")]
    VertexOutOfRange { edge: Edge, vertex: usize, n: usize },
    #[error("edge {0:?} appears twice")]
    DuplicateEdge(Edge),
    #[error("density is undefined for an empty vertex set")]
    NoVertices,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing or malformed `n m` header")]
    BadHeader,
    #[error("expected exactly three vertex ids")]
    NotThreeUniform,
    #[error("vertex id is not a non-negative integer")]
    BadVertex,
    #[error("vertex {0} is out of range")]
    OutOfRange(usize),
    #[error("edge repeats a vertex")]
    RepeatedVertex,
    #[error("vertex ids are not in ascending order")]
    NotAscending,
    #[error("edge duplicates or precedes the previous edge")]
    NotSorted,
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("comment after the header")]
    LateComment,
    #[error("missing trailing newline")]
    NoTrailingNewline,
    #[error("empty line")]
    EmptyLine,
}

/// A 3-uniform hypergraph on vertices `0..n`: each edge sorted ascending,
/// the edge list sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Hypergraph3 {
    n: usize,
    edges: Vec<Edge>,
}

impl Hypergraph3 {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self, HypergraphError> {
        let mut out: Vec<Edge> = Vec::new();
        for mut e in edges {
            e.sort_unstable();
            if e[0] == e[1] || e[1] == e[2] {
                return Err(HypergraphError::RepeatedVertex(e));
            }
            if e[2] >= n {
                return Err(HypergraphError::VertexOutOfRange {
                    edge: e,
                    vertex: e[2],
                    n,
                });
            }
            out.push(e);
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(HypergraphError::DuplicateEdge(w[0]));
        }
        Ok(Hypergraph3 { n, edges: out })
    }

    pub fn empty(n: usize) -> Self {
        Hypergraph3 {
            n,
            edges: Vec::new(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edge indices incident to each vertex, ascending.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v].push(i);
            }
        }
        inc
    }

    /// Sub-hypergraph on the same vertex set keeping the listed edges.
    pub fn restrict_edges(&self, keep: impl IntoIterator<Item = usize>) -> Self {
        let mut edges: Vec<Edge> = keep.into_iter().map(|i| self.edges[i]).collect();
        edges.sort_unstable();
        edges.dedup();
        Hypergraph3 { n: self.n, edges }
    }
}

/// True iff no two edges share two vertices. Each vertex pair may be
/// covered at most once.
pub fn is_linear(h: &Hypergraph3) -> bool {
    let mut seen = HashSet::with_capacity(h.m() * 3);
    h.edges()
        .iter()
        .all(|&[a, b, c]| seen.insert((a, b)) && seen.insert((a, c)) && seen.insert((b, c)))
}

/// `m / n^2`, exact.
pub fn density(h: &Hypergraph3) -> Result<Rational, HypergraphError> {
    if h.n() == 0 {
        return Err(HypergraphError::NoVertices);
    }
    let n = h.n() as i128;
    Ok(Rational::new(h.m() as i128, n * n))
}

pub fn degrees(h: &Hypergraph3) -> Vec<usize> {
    let mut d = vec![0; h.n()];
    for e in h.edges() {
        for &v in e {
            d[v] += 1;
        }
    }
    d
}

/// Minimum over all `n` vertices, isolated ones included. `None` when n = 0.
pub fn min_degree(h: &Hypergraph3) -> Option<usize> {
    degrees(h).into_iter().min()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    V1,
    V2,
    SubsetOfV1,
    SubsetOfV2,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Origin::V1 => "V1",
            Origin::V2 => "V2",
            Origin::SubsetOfV1 => "S-of-V1",
            Origin::SubsetOfV2 => "S-of-V2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexRecord {
    pub origin: Origin,
    pub x: FieldElement,
    pub point: AffinePoint,
}

/// Provenance of each vertex id: which point set it came from and where.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexMap {
    records: Vec<VertexRecord>,
}

impl VertexMap {
    /// Panics if two records name the same point.
    pub fn new(records: Vec<VertexRecord>) -> Self {
        let mut seen = HashSet::new();
        for r in &records {
            assert!(
                seen.insert(r.point),
                "vertex map is not injective at {:?}",
                r.point
            );
        }
        VertexMap { records }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: usize) -> Option<&VertexRecord> {
        self.records.get(id)
    }

    pub fn records(&self) -> &[VertexRecord] {
        &self.records
    }

    pub fn id_of(&self, point: AffinePoint) -> Option<usize> {
        self.records.iter().position(|r| r.point == point)
    }
}

pub fn encode(h: &Hypergraph3) -> String {
    encode_with_provenance(h, None)
}

pub fn encode_with_provenance(h: &Hypergraph3, map: Option<&VertexMap>) -> String {
    let mut s = String::with_capacity(16 + h.m() * 12);
    if let Some(map) = map {
        for (id, r) in map.records().iter().enumerate() {
            let _ = writeln!(s, "# vertex {id} {} {} {}", r.origin, r.point.x, r.point.y);
        }
    }
    let _ = writeln!(s, "{} {}", h.n(), h.m());
    for [a, b, c] in h.edges() {
        let _ = writeln!(s, "{a} {b} {c}");
    }
    s
}

/// Parses canonical `.hg3` text. Line numbers in errors are 1-based.
pub fn decode(text: &str) -> Result<Hypergraph3, ParseError> {
    let err = |line, kind| ParseError { line, kind };
    if !text.is_empty() && !text.ends_with('\n') {
        let last = text.lines().count();
        return Err(err(last, ParseErrorKind::NoTrailingNewline));
    }
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (header_no, header) = loop {
        match lines.next() {
            None => return Err(err(1, ParseErrorKind::BadHeader)),
            Some((_, l)) if l.starts_with('#') => continue,
            Some(h) => break h,
        }
    };
    let nums: Vec<&str> = header.split(' ').collect();
    let (n, m) = match nums.as_slice() {
        [n, m] => match (parse_id(n), parse_id(m)) {
            (Some(n), Some(m)) => (n, m),
            _ => return Err(err(header_no, ParseErrorKind::BadHeader)),
        },
        _ => return Err(err(header_no, ParseErrorKind::BadHeader)),
    };

    let mut edges: Vec<Edge> = Vec::with_capacity(m);
    for (no, line) in lines {
        if line.starts_with('#') {
            return Err(err(no, ParseErrorKind::LateComment));
        }
        if line.is_empty() {
            return Err(err(no, ParseErrorKind::EmptyLine));
        }
        let parts: Vec<&str> = line.split(' ').collect();
        if parts.len() != 3 {
            return Err(err(no, ParseErrorKind::NotThreeUniform));
        }
        let mut e = [0usize; 3];
        for (slot, part) in e.iter_mut().zip(&parts) {
            *slot = parse_id(part).ok_or(err(no, ParseErrorKind::BadVertex))?;
            if *slot >= n {
                return Err(err(no, ParseErrorKind::OutOfRange(*slot)));
            }
        }
        if e[0] == e[1] || e[1] == e[2] || e[0] == e[2] {
            return Err(err(no, ParseErrorKind::RepeatedVertex));
        }
        if !(e[0] < e[1] && e[1] < e[2]) {
            return Err(err(no, ParseErrorKind::NotAscending));
        }
        if edges.last().is_some_and(|prev| *prev >= e) {
            return Err(err(no, ParseErrorKind::NotSorted));
        }
        edges.push(e);
    }
    if edges.len() != m {
        let last = text.lines().count().max(1);
        return Err(err(
            last,
            ParseErrorKind::EdgeCount {
                expected: m,
                found: edges.len(),
            },
        ));
    }
    Ok(Hypergraph3 { n, edges })
}

fn parse_id(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0'))
    {
        return None;
    }
    s.parse().ok()
}
