//! Monte Carlo laboratory for two-qubit eigenvalue-parameterized separability
//! functions (ESFs).
//!
//! The crate samples Haar-random spectral orbits of 4x4 density matrices,
//! tallies Peres-Horodecki separability verdicts into bins of the maximal
//! concurrence over the orbit, and post-processes the binned curves: Dyson
//! squaring comparison, power-form fits on the upper half-range, changepoint
//! and intersection detection on the lower half-range, and Hilbert-Schmidt /
//! Bures separability-probability contributions by self-normalized importance
//! sampling over eigenvalue measures.

pub mod analysis;
pub mod estimator;
pub mod measures;
pub mod qstate;
