//! Exact combinatorics for factoring proper birational toric maps.
//!
//! Everything here is exact: lattice vectors are `num::BigInt`, all
//! intermediate linear algebra is `num::BigRational`, and no floating point
//! is used anywhere. The crate provides, bottom up:
//!
//! * [`lattice`] — primitive vectors, lattice indices, kernels, and exact
//!   enumeration of parallelepiped lattice points;
//! * [`fan`] — simplicial rational fans, stars, star subdivisions,
//!   multiplicities, and resolution of singularities by star subdivision;
//! * [`cobordism`] — fans in an extended lattice `N⁺ = N ⊕ Z` carrying the
//!   projection `π : N⁺ → N`, with circuits, π-multiplicities, profiles,
//!   codefiniteness, upper/lower boundaries, and signed circuit subdivisions;
//! * [`desing`] — π-desingularization: subdivide a cobordism fan until every
//!   cone is π-nonsingular, with a replayable trace;
//! * [`factor`] — extraction of a blowup/blowdown factorization from a
//!   π-nonsingular cobordism fan, plus constructors for the cobordism of a
//!   single blowup and of a weighted one-parameter action;
//! * [`ideal`] — monomial ideals of fixed weight on a smooth chart, their
//!   products, Newton subdivisions, and toroidal-action checks;
//! * [`json`] — stable serialization schemas for fans, traces, and reports;
//! * [`sample`] — seeded random generators used by the test suites and the
//!   CLI self-test.

pub mod cobordism;
pub mod desing;
pub mod error;
pub mod factor;
pub mod fan;
pub mod ideal;
pub mod json;
pub mod lattice;
mod matrix;
pub mod sample;

pub use error::{Error, Result};

/// Integer vector in a lattice, with exact (arbitrary precision) entries.
pub type IntVec = Vec<num::BigInt>;

/// Rational vector, used for exact intermediate linear algebra.
pub type RatVec = Vec<num::BigRational>;
