// SPDX-License-Identifier: Apache-2.0

//! Incidence geometry of the affine plane `AG(2, p)` and its projective
//! closure, restricted to what the parabola constructions need.

use std::collections::HashSet;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;
use thiserror::Error;

use crate::ffield::{inv, legendre, sqrt_mod, FieldElement, FieldError, Prime};
use crate::par::{self, Exec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("a secant needs two distinct parameters, got {0} twice")]
    DegenerateSecant(u64),
    #[error("hexagon vertex {0} is repeated")]
    RepeatedPoint(usize),
    #[error("hexagon vertex {0} is not on the parabola")]
    OffConic(usize),
    #[error("ordering must be a permutation of 0..6")]
    BadOrdering,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffinePoint {
    pub x: FieldElement,
    pub y: FieldElement,
}

impl AffinePoint {
    pub fn new(x: FieldElement, y: FieldElement) -> Self {
        assert_eq!(
            x.modulus(),
            y.modulus(),
            "coordinates from different fields"
        );
        AffinePoint { x, y }
    }

    pub fn to_projective(self) -> ProjPoint {
        ProjPoint::new([self.x, self.y, self.x.modulus().one()])
    }
}

/// A point of `PG(2, p)` in homogeneous coordinates, scaled so the last
/// nonzero coordinate is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjPoint([FieldElement; 3]);

impl ProjPoint {
    /// Returns `None` for the zero vector, which is not a point.
    pub fn try_new(coords: [FieldElement; 3]) -> Option<Self> {
        let last = coords.iter().rposition(|c| !c.is_zero())?;
        let scale = inv(coords[last]).ok()?;
        Some(ProjPoint(coords.map(|c| c * scale)))
    }

    pub fn new(coords: [FieldElement; 3]) -> Self {
        Self::try_new(coords).expect("projective point cannot be the zero vector")
    }

    pub fn coords(&self) -> [FieldElement; 3] {
        self.0
    }

    pub fn is_at_infinity(&self) -> bool {
        self.0[2].is_zero()
    }
}

/// Cross product of homogeneous triples. Joins two points into a line or
/// meets two lines in a point.
pub fn cross(a: [FieldElement; 3], b: [FieldElement; 3]) -> [FieldElement; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn det3(a: [FieldElement; 3], b: [FieldElement; 3], c: [FieldElement; 3]) -> FieldElement {
    let k = cross(b, c);
    a[0] * k[0] + a[1] * k[1] + a[2] * k[2]
}

/// An affine line in its unique canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Line {
    /// `y = m x + c`
    Slant { m: FieldElement, c: FieldElement },
    /// `x = c`
    Vertical { c: FieldElement },
}

impl Line {
    pub fn through(a: AffinePoint, b: AffinePoint) -> Option<Line> {
        if a == b {
            return None;
        }
        if a.x == b.x {
            return Some(Line::Vertical { c: a.x });
        }
        let m = (b.y - a.y).try_div(b.x - a.x).ok()?;
        Some(Line::Slant {
            m,
            c: a.y - m * a.x,
        })
    }

    pub fn contains(&self, pt: AffinePoint) -> bool {
        match *self {
            Line::Slant { m, c } => pt.y == m * pt.x + c,
            Line::Vertical { c } => pt.x == c,
        }
    }
}

/// The shifted parabola `V_t = {(x, x^2 + t)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParabolaSpec {
    pub shift: FieldElement,
}

impl ParabolaSpec {
    pub fn new(shift: FieldElement) -> Self {
        ParabolaSpec { shift }
    }

    pub fn prime(&self) -> Prime {
        self.shift.modulus()
    }

    pub fn point(&self, x: FieldElement) -> AffinePoint {
        AffinePoint::new(x, x * x + self.shift)
    }

    pub fn contains(&self, pt: AffinePoint) -> bool {
        pt.y == pt.x * pt.x + self.shift
    }

    /// All `p` points, ordered by x.
    pub fn points(&self) -> impl Iterator<Item = AffinePoint> + '_ {
        self.prime().elements().map(move |x| self.point(x))
    }
}

/// Line through `(a, a^2 + t)` and `(b, b^2 + t)`: `y = (a+b) x - ab + t`.
pub fn secant_line(
    a: FieldElement,
    b: FieldElement,
    parabola: &ParabolaSpec,
) -> Result<Line, GeometryError> {
    if a == b {
        return Err(GeometryError::DegenerateSecant(a.residue()));
    }
    Ok(Line::Slant {
        m: a + b,
        c: parabola.shift - a * b,
    })
}

/// `(a - b)^2 - 4 * delta_t`: the discriminant of a secant of `V_t` meeting
/// `V_{t + delta_t}`.
pub fn discriminant_shift(a: FieldElement, b: FieldElement, delta_t: FieldElement) -> FieldElement {
    let d = a - b;
    let four = a.modulus().elem(4);
    d * d - four * delta_t
}

/// Points of `line` on `parabola`, sorted by x.
pub fn line_parabola_intersections(line: &Line, parabola: &ParabolaSpec) -> Vec<AffinePoint> {
    match *line {
        Line::Vertical { c } => vec![parabola.point(c)],
        Line::Slant { m, c } => {
            // x^2 - m x + (t - c) = 0
            let prime = parabola.prime();
            let four = prime.elem(4);
            let disc = m * m - four * (parabola.shift - c);
            let half = inv(prime.elem(2)).expect("p is odd");
            let mut xs: Vec<FieldElement> = match sqrt_mod(disc) {
                None => return Vec::new(),
                Some(roots) => roots.into_iter().map(|r| (m + r) * half).collect(),
            };
            xs.sort_by_key(|x| x.residue());
            xs.dedup();
            xs.into_iter().map(|x| parabola.point(x)).collect()
        }
    }
}

/// Number of points of `line` on `parabola` predicted by the discriminant
/// alone: `1 + legendre(disc)`.
pub fn predicted_intersection_count(line: &Line, parabola: &ParabolaSpec) -> usize {
    match *line {
        Line::Vertical { .. } => 1,
        Line::Slant { m, c } => {
            let four = parabola.prime().elem(4);
            (1 + legendre(m * m - four * (parabola.shift - c))) as usize
        }
    }
}

/// Tests the Pascal line of the hexagon `points[ordering[0..6]]` without any
/// validation: meets AB∩DE, BC∩EF, CD∩FA and checks their collinearity.
///
/// Degenerate configurations where a pair of opposite sides coincide produce
/// no meet point and report `false`.
pub fn pascal_meets_collinear(hexagon: &[AffinePoint; 6]) -> bool {
    let h = hexagon.map(|p| p.to_projective().coords());
    let side = |i: usize, j: usize| cross(h[i], h[j]);
    let meets = [
        cross(side(0, 1), side(3, 4)),
        cross(side(1, 2), side(4, 5)),
        cross(side(2, 3), side(5, 0)),
    ];
    if meets.iter().any(|m| m.iter().all(|c| c.is_zero())) {
        return false;
    }
    det3(meets[0], meets[1], meets[2]).is_zero()
}

/// Pascal's property for six distinct points of one parabola, taken in the
/// order given by `ordering`.
pub fn pascal_collinear(
    hexagon: &[AffinePoint; 6],
    parabola: &ParabolaSpec,
    ordering: [usize; 6],
) -> Result<bool, GeometryError> {
    let mut seen = [false; 6];
    for &i in &ordering {
        if i >= 6 || seen[i] {
            return Err(GeometryError::BadOrdering);
        }
        seen[i] = true;
    }
    let mut distinct = HashSet::new();
    for (i, pt) in hexagon.iter().enumerate() {
        if !parabola.contains(*pt) {
            return Err(GeometryError::OffConic(i));
        }
        if !distinct.insert(*pt) {
            return Err(GeometryError::RepeatedPoint(i));
        }
    }
    let ordered = ordering.map(|i| hexagon[i]);
    Ok(pascal_meets_collinear(&ordered))
}

/// Outcome of checking Pascal's property on seeded random hexagons of `V1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PascalSummary {
    pub p: u64,
    pub samples: usize,
    pub seed: u64,
    pub collinear: usize,
    pub failures: usize,
}

/// Draws `samples` hexagons of six distinct points of `V1` in random cyclic
/// order (one generator, drawn up front) and checks each projectively.
pub fn pascal_sample(p: Prime, samples: usize, seed: u64, exec: Exec) -> PascalSummary {
    let v1 = ParabolaSpec::new(p.zero());
    let mut rng = SplitMix64::seed_from_u64(seed);
    let pn = p.get();
    assert!(pn >= 7, "need six distinct points");
    let hexagons: Vec<[AffinePoint; 6]> = (0..samples)
        .map(|_| {
            let mut xs: Vec<u64> = Vec::with_capacity(6);
            while xs.len() < 6 {
                let x = rng.next_u64() % pn;
                if !xs.contains(&x) {
                    xs.push(x);
                }
            }
            [0, 1, 2, 3, 4, 5].map(|i| v1.point(FieldElement::new(xs[i], p)))
        })
        .collect();
    let ok = par::map_range(exec, samples, |i| {
        pascal_collinear(&hexagons[i], &v1, [0, 1, 2, 3, 4, 5]).unwrap_or(false)
    });
    let collinear = ok.iter().filter(|&&b| b).count();
    PascalSummary {
        p: pn,
        samples,
        seed,
        collinear,
        failures: samples - collinear,
    }
}
