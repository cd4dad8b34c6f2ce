//! Density-matrix treatment of entangled photon and spin-½ pairs, Leggett's
//! bounds on subensemble averages, and hidden-variable model estimators.
//!
//! Modules, bottom-up:
//!
//! - [`qcore`]: small dense complex matrices, kets, density operators,
//!   partial traces and ±1 observables.
//! - [`canonical`]: the two photon parity states and the spin singlet, with
//!   their closed-form joint probabilities and correlations.
//! - [`inequality`]: the Leggett bound check, the ±1 identities behind it and
//!   angle sweeps over the canonical states.
//! - [`hvt`]: hidden-variable subensemble models, exact and seeded Monte Carlo
//!   averages.

pub mod canonical;
pub mod error;
pub mod hvt;
pub mod inequality;
pub mod qcore;

pub use error::{Error, Result};

/// Absolute entrywise tolerance used for every exact identity.
pub const EPS: f64 = 1e-12;

/// Tolerance for normalizing user-supplied directions.
pub const NORM_TOL: f64 = 1e-9;
