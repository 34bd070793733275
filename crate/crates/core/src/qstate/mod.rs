//! Exact small-matrix domain primitives: spectra on the unit simplex, 4x4
//! density matrices, Haar samplers for O(4)/U(4), partial transpose, the
//! Peres-Horodecki separability test, and maximal concurrence over spectral
//! orbits.
//!
//! Everything here is pure given an explicit random stream; no shared state.

mod density;
mod eigen;
mod haar;
mod matrix;
mod spectrum;

pub use density::{
    bell_phi_plus, orbit_point, partial_transpose_mat, werner, DensityMatrix, Hermitian4,
    SeparabilityCheck,
};
pub(crate) use density::orbit_point_is_separable;
pub use eigen::jacobi_hermitian_eigenvalues;
pub use haar::{haar_orthogonal, haar_unitary};
pub use matrix::{Mat4, Scalar};
pub use spectrum::{Ensemble, Spectrum};

use thiserror::Error;

/// Tolerance on |sum(lambda) - 1| for a valid spectrum.
pub const SPECTRUM_SUM_TOL: f64 = 1e-12;
/// Validation tolerance on Hermiticity and unit trace of a density matrix.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// A density matrix may dip this far below zero and still count as
/// positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;
/// Band around zero within which the partial-transpose determinant is
/// treated as a boundary case (counted separable: closure convention).
pub const DET_BOUNDARY_EPS: f64 = 1e-12;
/// Eigenvalue tolerance for the slow-path separability oracle.
pub const EIG_BOUNDARY_EPS: f64 = 1e-10;
/// Convergence threshold on off-diagonal magnitudes in the Jacobi sweep.
pub const JACOBI_OFFDIAG_TOL: f64 = 1e-13;

#[derive(Debug, Error)]
pub enum QstateError {
    #[error("spectrum is not sorted non-increasingly: {0:?}")]
    UnsortedSpectrum([f64; 4]),
    #[error("spectrum sums to {sum:.17e}, expected 1 within {SPECTRUM_SUM_TOL:e}")]
    UnnormalizedSpectrum { sum: f64 },
    #[error("spectrum has a negative entry: {0:?}")]
    NegativeSpectrum([f64; 4]),
    #[error("matrix is not Hermitian: max defect {0:.3e}")]
    NotHermitian(f64),
    #[error("matrix trace is {0:.17e}, expected 1")]
    NotUnitTrace(f64),
    #[error("matrix has eigenvalue {0:.3e} below the positivity tolerance")]
    NotPositiveSemidefinite(f64),
    #[error("beta must be 1 (real) or 2 (complex), got {0}")]
    InvalidBeta(u8),
}
