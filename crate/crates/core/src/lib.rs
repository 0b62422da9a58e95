//! Exact enumeration and verification for lattice trees and lattice (bond)
//! animals on `Z^d`.
//!
//! * [`lattice`]: nearest-neighbour and spread-out lattices, sites, bonds.
//! * [`enumeration`]: counts `t_n` and `a_n` of trees and animals at the origin.
//! * [`cache`]: append-only persistent table of counts.
//! * [`planetree`]: rooted plane trees, weights `prod 1/xi!`, mean-field `f_n`.
//! * [`meanfield`]: configurations `(T, phi)` and the folding identities.
//! * [`cuttree`]: the animal to cut-tree bijection.
//! * [`asymptotics`]: `z0`, Penrose bounds, series and finite-size estimators.
//! * [`report`]: machine-readable reports behind the `latgrow` binary.

pub mod asymptotics;
pub mod cache;
pub mod cuttree;
pub mod enumeration;
pub mod error;
pub mod lattice;
pub mod meanfield;
pub mod planetree;
pub mod real;
pub mod report;

pub use enumeration::{BigCount, BondSubgraph, EnumOptions, Kind};
pub use error::{Error, Result};
pub use lattice::{Bond, BondEnd, HalfBond, LatticeSpec, Site};
pub use planetree::{ExactRational, PlaneTree};
pub use real::{Precision, Real};
