// SPDX-License-Identifier: Apache-2.0

//! The three conic constructions.
//!
//! * `base`: vertices `V1 ∪ V2`, one edge per secant of `V1` that meets `V2`.
//! * `random`: vertices `V1 ∪ S` with `S ⊂ V2` sampled at rate `rho`.
//! * `qr`: vertices `S ∪ V2` with `S ⊂ V1` the points over squares; one edge
//!   per secant of `V2` meeting `S`.
//!
//! When a line offers two admissible third points, the one with the smaller
//! x-coordinate is taken. Vertex ids are laid out as the first point block
//! then the second, each sorted by x.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;
use thiserror::Error;

use crate::ffield::{legendre, FieldElement, FieldError, Prime};
use crate::geometry::{
    discriminant_shift, line_parabola_intersections, secant_line, AffinePoint, ParabolaSpec,
};
use crate::hypergraph::{density, Edge, Hypergraph3, Origin, VertexMap, VertexRecord};
use crate::Rational;

/// Smallest prime accepted by the builders.
pub const MIN_CONSTRUCTION_PRIME: u64 = 5;

/// Name of the sampling generator recorded in random-construction reports.
pub const GENERATOR: &str = "splitmix64";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid sampling probability {num}/{den}")]
    InvalidProbability { num: u64, den: u64 },
    #[error("rho = {0} is outside [0, 1]")]
    RhoOutOfRange(Rational),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Base,
    Random,
    Qr,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Kind::Base => "base",
            Kind::Random => "random",
            Kind::Qr => "qr",
        })
    }
}

/// Counts for one construction against the closed forms. Serialized keys
/// follow declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionReport {
    pub p: u64,
    pub kind: Kind,
    pub n: usize,
    pub m: usize,
    pub density_num: i128,
    pub density_den: i128,
    pub chi_minus_1: i32,
    pub predicted_m: Option<i64>,
    pub two_point_secants: usize,
    pub selection_size: Option<usize>,
    pub seed: Option<u64>,
    pub density_decimal: String,
    pub generator: Option<&'static str>,
}

impl ConstructionReport {
    fn new(p: Prime, kind: Kind, h: &Hypergraph3, two_point_secants: usize) -> Self {
        let d = density(h).expect("constructions have vertices");
        ConstructionReport {
            p: p.get(),
            kind,
            n: h.n(),
            m: h.m(),
            density_num: *d.numer(),
            density_den: *d.denom(),
            chi_minus_1: p.chi_minus_one(),
            predicted_m: None,
            two_point_secants,
            selection_size: None,
            seed: None,
            density_decimal: decimal(d, 12),
            generator: None,
        }
    }

    pub fn density(&self) -> Rational {
        Rational::new(self.density_num, self.density_den)
    }

    /// Violated invariants, empty when the report is consistent.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.n as i128;
        if self.density() * Rational::from_integer(n * n) != Rational::from_integer(self.m as i128)
        {
            out.push(format!(
                "density * n^2 != m ({} vs {})",
                self.density(),
                self.m
            ));
        }
        if let Some(pred) = self.predicted_m {
            if pred != self.m as i64 {
                out.push(format!(
                    "m = {} but the closed form predicts {pred}",
                    self.m
                ));
            }
        }
        out
    }
}

/// A built hypergraph with its provenance and report.
#[derive(Debug, Clone)]
pub struct Construction {
    pub hypergraph: Hypergraph3,
    pub vertices: VertexMap,
    pub report: ConstructionReport,
}

/// Fixed-point rendering of a non-negative rational, truncated.
pub fn decimal(r: Rational, places: usize) -> String {
    let (num, den) = (*r.numer(), *r.denom());
    let neg = (num < 0) != (den < 0);
    let (num, den) = (num.unsigned_abs(), den.unsigned_abs());
    let mut s = String::new();
    if neg && num != 0 {
        s.push('-');
    }
    s.push_str(&(num / den).to_string());
    if places > 0 {
        s.push('.');
        let mut rem = num % den;
        for _ in 0..places {
            rem *= 10;
            s.push(char::from(b'0' + (rem / den) as u8));
            rem %= den;
        }
    }
    s
}

fn construction_prime(p: u64) -> Result<Prime, ConstructError> {
    Ok(Prime::at_least(p, MIN_CONSTRUCTION_PRIME)?)
}

/// `p (p - chi(-1)) / 4`.
pub fn predicted_base_edges(p: Prime) -> i64 {
    let p_i = p.get() as i64;
    p_i * (p_i - p.chi_minus_one() as i64) / 4
}

/// `p (p - chi(-1) - 4) / 4`.
pub fn predicted_two_point_secants(p: Prime) -> i64 {
    let p_i = p.get() as i64;
    p_i * (p_i - p.chi_minus_one() as i64 - 4) / 4
}

fn records(origin: Origin, parabola: &ParabolaSpec, xs: &[FieldElement]) -> Vec<VertexRecord> {
    xs.iter()
        .map(|&x| VertexRecord {
            origin,
            x,
            point: parabola.point(x),
        })
        .collect()
}

/// Third point of the secant `{a, b}` of `from` on `to`, restricted to
/// `admissible`; smallest x wins. Also reports how many were admissible.
fn pick_third(
    a: FieldElement,
    b: FieldElement,
    from: &ParabolaSpec,
    to: &ParabolaSpec,
    admissible: impl Fn(FieldElement) -> bool,
) -> (Option<AffinePoint>, usize) {
    let line = secant_line(a, b, from).expect("a != b");
    let hits: Vec<AffinePoint> = line_parabola_intersections(&line, to)
        .into_iter()
        .filter(|pt| admissible(pt.x))
        .collect();
    (hits.first().copied(), hits.len())
}

fn unordered_pairs(p: Prime) -> impl Iterator<Item = (FieldElement, FieldElement)> {
    p.elements().flat_map(move |a| {
        p.elements()
            .skip(a.residue() as usize + 1)
            .map(move |b| (a, b))
    })
}

/// Secants of `V1` through a selected subset of `V2`. Shared by the base
/// and random builders.
fn build_v1_secants(p: Prime, selected: &[bool]) -> (Hypergraph3, VertexMap, usize) {
    let v1 = ParabolaSpec::new(p.zero());
    let v2 = ParabolaSpec::new(p.one());
    let pn = p.get() as usize;

    let xs_v1: Vec<FieldElement> = p.elements().collect();
    let xs_s: Vec<FieldElement> = p
        .elements()
        .filter(|x| selected[x.residue() as usize])
        .collect();
    let mut id_of_s = vec![usize::MAX; pn];
    for (i, x) in xs_s.iter().enumerate() {
        id_of_s[x.residue() as usize] = pn + i;
    }
    let all = xs_s.len() == pn;

    let mut edges: Vec<Edge> = Vec::new();
    let mut two = 0;
    for (a, b) in unordered_pairs(p) {
        let (third, count) = pick_third(a, b, &v1, &v2, |x| selected[x.residue() as usize]);
        if let Some(w) = third {
            edges.push([
                a.residue() as usize,
                b.residue() as usize,
                id_of_s[w.x.residue() as usize],
            ]);
        }
        if count == 2 {
            two += 1;
        }
    }
    let h = Hypergraph3::new(pn + xs_s.len(), edges).expect("secant edges are distinct triples");
    let mut recs = records(Origin::V1, &v1, &xs_v1);
    recs.extend(records(
        if all { Origin::V2 } else { Origin::SubsetOfV2 },
        &v2,
        &xs_s,
    ));
    (h, VertexMap::new(recs), two)
}

pub fn build_base(p: u64) -> Result<Construction, ConstructError> {
    let p = construction_prime(p)?;
    let (h, map, two) = build_v1_secants(p, &vec![true; p.get() as usize]);
    let mut report = ConstructionReport::new(p, Kind::Base, &h, two);
    report.predicted_m = Some(predicted_base_edges(p));
    Ok(Construction {
        hypergraph: h,
        vertices: map,
        report,
    })
}

/// Unordered pairs `{a, b}` whose `V1`-secant meets `V2` twice, counted
/// from the discriminant character.
pub fn count_two_point_secants(p: u64) -> Result<usize, ConstructError> {
    let p = construction_prime(p)?;
    Ok(unordered_pairs(p)
        .filter(|&(a, b)| legendre(discriminant_shift(a, b, p.one())) == 1)
        .count())
}

/// Per-point inclusion mask for `V2` (indexed by x). One `u64` draw per
/// point in x order; a point is kept iff the draw is below `floor(rho 2^64)`.
pub fn sample_selection(
    p: Prime,
    rho_num: u64,
    rho_den: u64,
    seed: u64,
) -> Result<Vec<bool>, ConstructError> {
    if rho_den == 0 || rho_num > rho_den {
        return Err(ConstructError::InvalidProbability {
            num: rho_num,
            den: rho_den,
        });
    }
    let threshold = ((rho_num as u128) << 64) / rho_den as u128;
    let mut rng = SplitMix64::seed_from_u64(seed);
    Ok((0..p.get())
        .map(|_| (rng.next_u64() as u128) < threshold)
        .collect())
}

pub fn build_random(
    p: u64,
    rho_num: u64,
    rho_den: u64,
    seed: u64,
) -> Result<Construction, ConstructError> {
    let p = construction_prime(p)?;
    let selected = sample_selection(p, rho_num, rho_den, seed)?;
    let (h, map, two) = build_v1_secants(p, &selected);
    let mut report = ConstructionReport::new(p, Kind::Random, &h, two);
    report.selection_size = Some(selected.iter().filter(|&&s| s).count());
    report.seed = Some(seed);
    report.generator = Some(GENERATOR);
    Ok(Construction {
        hypergraph: h,
        vertices: map,
        report,
    })
}

pub fn build_qr(p: u64) -> Result<Construction, ConstructError> {
    let p = construction_prime(p)?;
    let v1 = ParabolaSpec::new(p.zero());
    let v2 = ParabolaSpec::new(p.one());
    let pn = p.get() as usize;

    let squares = p.squares();
    let s = squares.len();
    let mut id_of_s = vec![usize::MAX; pn];
    for (i, x) in squares.iter().enumerate() {
        id_of_s[x.residue() as usize] = i;
    }

    let mut edges: Vec<Edge> = Vec::new();
    let mut two = 0;
    for (a, b) in unordered_pairs(p) {
        let (third, count) = pick_third(a, b, &v2, &v1, |x| {
            id_of_s[x.residue() as usize] != usize::MAX
        });
        if let Some(w) = third {
            edges.push([
                id_of_s[w.x.residue() as usize],
                s + a.residue() as usize,
                s + b.residue() as usize,
            ]);
        }
        if count == 2 {
            two += 1;
        }
    }
    let h = Hypergraph3::new(s + pn, edges).expect("secant edges are distinct triples");
    let mut recs = records(Origin::SubsetOfV1, &v1, &squares);
    recs.extend(records(Origin::V2, &v2, &p.elements().collect::<Vec<_>>()));

    let mut report = ConstructionReport::new(p, Kind::Qr, &h, two);
    report.selection_size = Some(s);
    Ok(Construction {
        hypergraph: h,
        vertices: VertexMap::new(recs),
        report,
    })
}

/// `(2 rho - rho^2) / (4 (1 + rho)^2)`: expected edges per squared vertex
/// count when each point of `V2` is kept with probability `rho`.
pub fn density_ratio(rho: Rational) -> Result<Rational, ConstructError> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    if rho < zero || rho > one {
        return Err(ConstructError::RhoOutOfRange(rho));
    }
    let two = Rational::from_integer(2);
    let four = Rational::from_integer(4);
    let denom = four * (one + rho) * (one + rho);
    Ok((two * rho - rho * rho) / denom)
}

/// Maximiser of [`density_ratio`] over the grid `k / 1000`, `k = 0..=1000`,
/// compared exactly. Ties keep the smaller `rho`.
pub fn optimal_rho() -> Rational {
    let mut best = (Rational::from_integer(0), Rational::from_integer(0));
    for k in 0..=1000 {
        let rho = Rational::new(k, 1000);
        let v = density_ratio(rho).expect("grid lies in [0, 1]");
        if v > best.1 {
            best = (rho, v);
        }
    }
    best.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::odd_primes_in;
    use crate::hypergraph::is_linear;

    // Independent count: scan every x for each secant instead of solving.
    fn oracle_base_counts(p: u64) -> (usize, usize) {
        let (mut m, mut two) = (0, 0);
        for a in 0..p {
            for b in a + 1..p {
                let hits = (0..p)
                    .filter(|&x| (x * x + 1) % p == ((a + b) * x + p * p - a * b) % p)
                    .count();
                if hits > 0 {
                    m += 1;
                }
                if hits == 2 {
                    two += 1;
                }
            }
        }
        (m, two)
    }

    #[test]
    fn base_examples() {
        for (p, m) in [(5, 5), (7, 14), (13, 39)] {
            let c = build_base(p).unwrap();
            assert_eq!(c.hypergraph.n(), 2 * p as usize);
            assert_eq!(c.hypergraph.m(), m);
            assert_eq!(oracle_base_counts(p).0, m);
            assert!(c.report.violations().is_empty());
        }
        assert_eq!(
            build_base(7).unwrap().report.density(),
            Rational::new(1, 14)
        );
    }

    #[test]
    fn two_point_examples() {
        assert_eq!(count_two_point_secants(7).unwrap(), 7);
        assert_eq!(count_two_point_secants(5).unwrap(), 0);
        assert_eq!(count_two_point_secants(13).unwrap(), 26);
        for p in [5, 7, 13] {
            assert_eq!(oracle_base_counts(p).1, count_two_point_secants(p).unwrap());
        }
    }

    #[test]
    fn bad_primes_rejected() {
        assert!(matches!(
            build_base(6),
            Err(ConstructError::Field(FieldError::NotOddPrime(6)))
        ));
        assert!(matches!(
            build_base(3),
            Err(ConstructError::Field(FieldError::PrimeTooSmall { .. }))
        ));
        assert!(build_qr(2).is_err());
        assert!(count_two_point_secants(9).is_err());
    }

    #[test]
    fn base_vertex_layout() {
        let c = build_base(7).unwrap();
        let recs = c.vertices.records();
        assert_eq!(recs.len(), 14);
        for (i, r) in recs.iter().enumerate() {
            let (origin, x) = if i < 7 {
                (Origin::V1, i)
            } else {
                (Origin::V2, i - 7)
            };
            assert_eq!(r.origin, origin);
            assert_eq!(r.x.residue(), x as u64);
        }
        // each edge: two V1 ids and one V2 id
        for e in c.hypergraph.edges() {
            assert!(e[0] < 7 && e[1] < 7 && e[2] >= 7);
        }
    }

    #[test]
    fn edges_are_collinear_triples() {
        for build in [build_base, build_qr] {
            let c = build(11).unwrap();
            for e in c.hypergraph.edges() {
                let pts = e.map(|v| c.vertices.get(v).unwrap().point);
                let l = crate::geometry::Line::through(pts[0], pts[1]).unwrap();
                assert!(l.contains(pts[2]));
            }
        }
    }

    #[test]
    fn random_extremes() {
        let none = build_random(7, 0, 1, 42).unwrap();
        assert_eq!(none.hypergraph.m(), 0);
        assert_eq!(none.hypergraph.n(), 7);
        assert_eq!(none.report.selection_size, Some(0));
        let all = build_random(7, 1, 1, 42).unwrap();
        assert_eq!(all.hypergraph, build_base(7).unwrap().hypergraph);
        assert!(matches!(
            build_random(7, 3, 2, 1),
            Err(ConstructError::InvalidProbability { .. })
        ));
        assert!(matches!(
            build_random(7, 0, 0, 1),
            Err(ConstructError::InvalidProbability { .. })
        ));
    }

    #[test]
    fn random_is_deterministic() {
        let a = build_random(31, 1, 2, 9).unwrap();
        let b = build_random(31, 1, 2, 9).unwrap();
        assert_eq!(a.hypergraph, b.hypergraph);
        assert_eq!(a.report, b.report);
        let c = build_random(31, 1, 2, 10).unwrap();
        assert_ne!(a.hypergraph, c.hypergraph);
    }

    #[test]
    fn random_selection_is_pinned() {
        // Frozen so any change to the sampling contract is caught.
        let mask = sample_selection(Prime::new(13).unwrap(), 1, 2, 1).unwrap();
        let picked: Vec<usize> = mask
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(picked, FROZEN_SELECTION_P13_SEED1);
    }

    // reference splitmix64 (state += golden gamma, xor-shift-multiply finaliser)
    const FROZEN_SELECTION_P13_SEED1: &[usize] = &[3, 4, 8, 10, 12];

    #[test]
    fn qr_example_p5() {
        let c = build_qr(5).unwrap();
        let xs: Vec<(u64, u64)> = c.vertices.records()[..3]
            .iter()
            .map(|r| (r.point.x.residue(), r.point.y.residue()))
            .collect();
        assert_eq!(xs, vec![(0, 0), (1, 1), (4, 1)]);
        assert_eq!(c.hypergraph.n(), 8);
        // enumerated independently over the 10 pairs of V2
        assert_eq!(c.hypergraph.m(), 3);
        for e in c.hypergraph.edges() {
            assert!(e[0] < 3 && e[1] >= 3 && e[2] >= 3);
        }
    }

    #[test]
    fn qr_small_counts() {
        // (n, m, two-point) from an independent brute-force enumeration
        for (p, n, m, two) in [(7, 11, 6, 2), (11, 17, 18, 6), (13, 20, 27, 8)] {
            let c = build_qr(p).unwrap();
            assert_eq!(
                (
                    c.hypergraph.n(),
                    c.hypergraph.m(),
                    c.report.two_point_secants
                ),
                (n, m, two)
            );
        }
    }

    #[test]
    fn constructions_are_linear() {
        for p in odd_primes_in(5, 43) {
            let p = p.get();
            assert!(is_linear(&build_base(p).unwrap().hypergraph));
            assert!(is_linear(&build_qr(p).unwrap().hypergraph));
            assert!(is_linear(&build_random(p, 1, 2, p).unwrap().hypergraph));
        }
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(
            density_ratio(Rational::new(1, 2)).unwrap(),
            Rational::new(1, 12)
        );
        assert_eq!(
            density_ratio(Rational::from_integer(0)).unwrap(),
            Rational::from_integer(0)
        );
        assert_eq!(
            density_ratio(Rational::from_integer(1)).unwrap(),
            Rational::new(1, 16)
        );
        assert!(density_ratio(Rational::new(3, 2)).is_err());
        assert!(density_ratio(Rational::new(-1, 2)).is_err());
        assert_eq!(optimal_rho(), Rational::new(1, 2));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(Rational::new(1, 14), 6), "0.071428");
        assert_eq!(decimal(Rational::new(1, 12), 4), "0.0833");
        assert_eq!(decimal(Rational::from_integer(2), 2), "2.00");
    }
}
