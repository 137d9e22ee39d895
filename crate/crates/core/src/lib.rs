//! Random walks in dynamic random environments.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`] holds torus geometry, space-time fields, patches, backward
//!   paths and cylinder events.
//! * [`rng`] provides the counter-based, splittable random streams every
//!   simulation draws from.
//! * [`environments`] implements the environment families (layered spin
//!   flips, Ornstein-Uhlenbeck signs, contact process, probabilistic cellular
//!   automata, products of independent site chains).
//! * [`walker`] implements walk kernels, the quenched walk and the
//!   environment process seen from the walker.
//! * [`expansion`] is the exact backward path-sum oracle over site-chain
//!   environments.
//! * [`couplings`] contains the graphical, disagreement-percolation and
//!   strong disagreement-percolation couplings, the layered and OU couplings
//!   and the directed percolation tooling.
//! * [`estimators`] contains the Monte Carlo estimators and statistical tests.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod couplings;
pub mod environments;
pub mod error;
pub mod estimators;
pub mod expansion;
pub mod lattice;
pub mod parallel;
pub mod rng;
pub mod walker;

pub use error::{Error, Result};

/// Absolute tolerance used for exact (enumerated) probability comparisons.
pub const EXACT_TOL: f64 = 1e-12;
