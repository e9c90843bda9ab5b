//! Exact combinatorics of shatter functions.
//!
//! The crate covers finite set systems and their shatter functions
//! ([`setsystem`]), down-shift compression to simplicial complexes
//! ([`compression`]), face-level queries on complexes ([`complex`],
//! [`span`]), balanced rooted d-trees of prescribed density ([`dtree`]),
//! seeded random complex constructions ([`randgen`]), closed-form bounds
//! ([`bounds`]), and a small extremal search ([`search`]). The [`verify`]
//! module bundles the end-to-end checks run by `shatter verify-paper`.

pub mod bits;
pub mod bounds;
pub mod complex;
pub mod compression;
pub mod dtree;
mod error;
pub mod randgen;
pub mod search;
pub mod setsystem;
pub mod span;
pub mod verify;

pub use complex::{DensityReport, Face, SimplicialComplex};
pub use dtree::RootedDTree;
pub use error::{Error, Result};
pub use setsystem::{SetSystem, ShatterProfile};

/// Exact fraction used for densities and thresholds.
pub type Rational = num_rational::Ratio<i64>;
