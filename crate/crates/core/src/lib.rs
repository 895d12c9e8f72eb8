#![forbid(unsafe_code)]

//! Exact-arithmetic laboratory for divisor classes on blow-ups of the
//! projective plane.
//!
//! The lattice has basis `L, E₁, …, Eₙ` with `L² = 1`, `Eᵢ² = −1` and
//! mixed products zero; a class is written `(d; m₁, …, mₙ)`. On top of
//! the pairing the crate offers: the Cremona group action with orbit
//! tools and reduction to canonical representatives, enumeration of the
//! classes with `x² = K·x = −1`, combinatorial resolution of local pencil
//! singularities `u^a/v^b`, a catalog of pencil families with their
//! base-point bookkeeping, ray-level reports and a numerical negativity
//! screen, and a small CLI over all of it.
//!
//! Coordinates are arbitrary-precision integers throughout, so there is
//! no overflow regime; derived quantities that can be fractional (the
//! adjunction genus) are exact rationals.

pub mod catalog;
pub mod cli;
pub mod cremona;
pub mod error;
pub mod io;
pub mod lattice;
pub mod rays;
pub mod resolution;

pub use error::{Error, Result};
pub use lattice::{DivisorClass, LatticeContext, QMembership};
