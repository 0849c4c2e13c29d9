//! Simulation library for a two-path interferometer with a coin-randomized
//! second stage.
//!
//! The crate is organized bottom-up:
//!
//! - [`qmath`]: exact 2x2 complex linear algebra (states, unitaries, density
//!   matrices, spectral decomposition, entropy) and the shared tolerances.
//! - [`interferometer`]: beam splitters, phase shifters, and the two device
//!   orientations built from them.
//! - [`trials`]: deterministic, seedable per-trial Monte Carlo over a grid of
//!   phase settings.
//! - [`cipher`]: the XOR (one-time-pad) view of coin-randomized detector
//!   records, and partitioning of records by coin value.
//! - [`mixtures`]: ensemble-averaged density matrices, both exact and
//!   Monte Carlo, including Gaussian phase noise.

pub mod cipher;
pub mod interferometer;
pub mod mixtures;
pub mod qmath;
pub mod trials;
