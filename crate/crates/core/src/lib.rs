// SPDX-License-Identifier: Apache-2.0

//! Dense linear 3-uniform hypergraphs without 3×3 grids, built from two
//! shifted parabolas over `F_p`, together with the exhaustive checks that
//! back their claimed properties.
//!
//! The heavy loops (grid and core searches, census enumeration, subset
//! maxima, seed sweeps) go through [`par`], which uses rayon when the
//! `parallel` feature is on and a plain loop otherwise.

pub mod charsum;
pub mod construct;
pub mod detect;
pub mod ffield;
pub mod fixtures;
pub mod geometry;
pub mod hypergraph;
pub mod lemma;
pub mod par;

/// Exact rationals used for densities, expectations and error terms.
pub type Rational = num_rational::Ratio<i128>;

pub use construct::{build_base, build_qr, build_random, Construction, ConstructionReport, Kind};
pub use detect::{find_grid, find_prism, find_small_two_core, two_core, CoreWitness, GridWitness};
pub use ffield::{legendre, FieldElement, Prime};
pub use hypergraph::{decode, encode, is_linear, Hypergraph3, VertexMap};
pub use par::Exec;

/// Serializes a rational as `"num/den"` (or `"num"` when integral).
pub fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

pub fn serialize_rational_opt<S: serde::Serializer>(
    r: &Option<Rational>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.collect_str(r),
        None => s.serialize_none(),
    }
}
