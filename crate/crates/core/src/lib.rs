//! Exact-arithmetic case analysis of Sarkisov links attached to one-nodal
//! non-factorial Fano threefolds of Picard rank one.
//!
//! The crate reproduces the numerical side of the classification: the
//! admissible `(d, h^{1,2}, d1)` triples, the transfer-system solutions for
//! each pairing of link sides, the intersection-form computations on the
//! rank-three Picard lattice, and the assembled 17-row table.

pub mod anchors;
pub mod cases;
pub mod classify;
pub mod error;
pub mod lattice;
pub mod rational;
pub mod report;
pub mod solver;
pub mod tables;

pub use error::{Error, Result};
pub use rational::Rational;
