//! Aztec diamond dimer models with `k x l` doubly periodic edge weights.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`] owns coordinates, weight schemes, the diamond graph, matchings
//!   and height functions.
//! * [`kasteleyn`] does exact finite-size linear algebra (partition functions,
//!   inverse Kasteleyn correlations) and carries the brute-force matching
//!   enumerator used as the ground-truth oracle everywhere else.
//! * [`sampler`] draws exact random tilings by generalized domino shuffling.
//! * [`spectral`] handles the characteristic polynomial, amoebas, the genus-1
//!   period, theta functions and discrete Gaussian laws.
//! * [`fluctlab`] extracts discrete components from sampled height functions
//!   and runs Monte Carlo experiments against the spectral predictions.
//! * [`verify`] bundles the oracle suites behind `aztec verify`.

pub mod error;
pub mod fluctlab;
pub mod kasteleyn;
pub mod lattice;
pub mod sampler;
pub mod spectral;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};

/// Version string written into every provenance block.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
