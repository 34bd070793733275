use num_complex::Complex64;
use rand::Rng;

use super::eigen::jacobi_hermitian_eigenvalues;
use super::haar::haar_sample;
use super::matrix::{Mat4, Scalar};
use super::spectrum::{Ensemble, Spectrum};
use super::{QstateError, DET_BOUNDARY_EPS, EIG_BOUNDARY_EPS, HERMITICITY_TOL, PSD_TOL};

/// Two-qubit density matrix: 4x4, unit trace, positive semidefinite;
/// real-symmetric entries for beta = 1, complex-Hermitian for beta = 2.
#[derive(Clone, Copy, Debug)]
pub enum DensityMatrix {
    Real(Mat4<f64>),
    Complex(Mat4<Complex64>),
}

/// A 4x4 Hermitian (not necessarily positive) matrix, e.g. a partial
/// transpose of a density matrix.
#[derive(Clone, Copy, Debug)]
pub enum Hermitian4 {
    Real(Mat4<f64>),
    Complex(Mat4<Complex64>),
}

/// Separability verdict with the quantities it was decided on.
#[derive(Clone, Copy, Debug)]
pub struct SeparabilityCheck {
    pub separable: bool,
    /// det of the partial transpose (the fast-path statistic).
    pub pt_det: f64,
    /// Minimum eigenvalue of the partial transpose (the slow-path oracle).
    pub pt_min_eigenvalue: f64,
    /// |pt_det| within the boundary band: the verdict defaults to separable
    /// (closure of the separable set).
    pub near_boundary: bool,
}

fn validate<T: Scalar>(m: &Mat4<T>) -> Result<(), QstateError> {
    let defect = m.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(QstateError::NotHermitian(defect));
    }
    let tr = m.trace().re();
    if (tr - 1.0).abs() > HERMITICITY_TOL {
        return Err(QstateError::NotUnitTrace(tr));
    }
    let min_eig = jacobi_hermitian_eigenvalues(m)[3];
    if min_eig < -PSD_TOL {
        return Err(QstateError::NotPositiveSemidefinite(min_eig));
    }
    Ok(())
}

impl DensityMatrix {
    pub fn from_real(m: Mat4<f64>) -> Result<Self, QstateError> {
        validate(&m)?;
        Ok(DensityMatrix::Real(m))
    }

    pub fn from_complex(m: Mat4<Complex64>) -> Result<Self, QstateError> {
        validate(&m)?;
        Ok(DensityMatrix::Complex(m))
    }

    pub fn ensemble(&self) -> Ensemble {
        match self {
            DensityMatrix::Real(_) => Ensemble::Real,
            DensityMatrix::Complex(_) => Ensemble::Complex,
        }
    }

    pub fn trace(&self) -> f64 {
        match self {
            DensityMatrix::Real(m) => m.trace(),
            DensityMatrix::Complex(m) => m.trace().re,
        }
    }

    /// Entries as complex regardless of ensemble (convenience view).
    pub fn entries(&self) -> Mat4<Complex64> {
        match self {
            DensityMatrix::Real(m) => {
                let mut out = Mat4::<Complex64>::zero();
                for i in 0..4 {
                    for j in 0..4 {
                        out.0[i][j] = Complex64::new(m.0[i][j], 0.0);
                    }
                }
                out
            }
            DensityMatrix::Complex(m) => *m,
        }
    }

    /// Eigenvalues sorted descending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        match self {
            DensityMatrix::Real(m) => jacobi_hermitian_eigenvalues(m),
            DensityMatrix::Complex(m) => jacobi_hermitian_eigenvalues(m),
        }
    }

    pub fn spectrum(&self) -> Result<Spectrum, QstateError> {
        Spectrum::new(self.eigenvalues())
    }

    /// Transposes the second qubit. Transposing the first instead gives the
    /// same spectrum and determinant, so the separability test does not
    /// depend on this convention.
    pub fn partial_transpose(&self) -> Hermitian4 {
        match self {
            DensityMatrix::Real(m) => Hermitian4::Real(partial_transpose_mat(m)),
            DensityMatrix::Complex(m) => Hermitian4::Complex(partial_transpose_mat(m)),
        }
    }

    /// Peres-Horodecki test, determinant fast path. For two qubits the
    /// partial transpose has at most one negative eigenvalue, so its
    /// determinant is negative exactly on the entangled states; the
    /// measure-zero band |det| <= DET_BOUNDARY_EPS counts as separable.
    pub fn is_separable(&self) -> bool {
        self.pt_det() >= -DET_BOUNDARY_EPS
    }

    fn pt_det(&self) -> f64 {
        match self {
            DensityMatrix::Real(m) => partial_transpose_mat(m).det(),
            DensityMatrix::Complex(m) => partial_transpose_mat(m).det().re,
        }
    }

    /// Full diagnostic: determinant fast path plus the eigenvalue slow path.
    pub fn separability_check(&self) -> SeparabilityCheck {
        let pt = self.partial_transpose();
        let pt_det = pt.det();
        let pt_min_eigenvalue = pt.eigenvalues_unchecked()[3];
        SeparabilityCheck {
            separable: pt_det >= -DET_BOUNDARY_EPS,
            pt_det,
            pt_min_eigenvalue,
            near_boundary: pt_det.abs() <= DET_BOUNDARY_EPS,
        }
    }
}

impl Hermitian4 {
    pub fn det(&self) -> f64 {
        match self {
            Hermitian4::Real(m) => m.det(),
            Hermitian4::Complex(m) => m.det().re,
        }
    }

    /// Eigenvalues sorted descending, after a Hermiticity check.
    pub fn eigenvalues(&self) -> Result<[f64; 4], QstateError> {
        let defect = match self {
            Hermitian4::Real(m) => m.hermiticity_defect(),
            Hermitian4::Complex(m) => m.hermiticity_defect(),
        };
        if defect > EIG_BOUNDARY_EPS {
            return Err(QstateError::NotHermitian(defect));
        }
        Ok(self.eigenvalues_unchecked())
    }

    fn eigenvalues_unchecked(&self) -> [f64; 4] {
        match self {
            Hermitian4::Real(m) => jacobi_hermitian_eigenvalues(m),
            Hermitian4::Complex(m) => jacobi_hermitian_eigenvalues(m),
        }
    }

    /// Slow-path separability verdict: minimum eigenvalue above -EIG_BOUNDARY_EPS.
    pub fn positive_semidefinite_within_tol(&self) -> bool {
        self.eigenvalues_unchecked()[3] >= -EIG_BOUNDARY_EPS
    }
}

/// Partial transpose of the second subsystem in the computational-basis
/// ordering (row index 2i+j for subsystem indices i, j):
/// entry[(i,j),(k,l)] -> entry[(i,l),(k,j)]. Pure index permutation, so trace
/// and Hermiticity are preserved exactly; applying it twice is the identity.
pub fn partial_transpose_mat<T: Scalar>(m: &Mat4<T>) -> Mat4<T> {
    let mut out = Mat4::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + l][2 * k + j] = m.0[2 * i + j][2 * k + l];
                }
            }
        }
    }
    out
}

/// Conjugation rho = Q diag(lambda) Q^dagger, filling the lower triangle by
/// symmetry so the result is exactly Hermitian.
fn conjugate_diag<T: Scalar>(q: &Mat4<T>, lambda: &[f64; 4]) -> Mat4<T> {
    let mut rho = Mat4::zero();
    for i in 0..4 {
        for j in i..4 {
            let mut acc = T::zero();
            for k in 0..4 {
                acc += (q.0[i][k] * q.0[j][k].conj()).scale(lambda[k]);
            }
            if i == j {
                rho.0[i][i] = T::from_re(acc.re());
            } else {
                rho.0[i][j] = acc;
                rho.0[j][i] = acc.conj();
            }
        }
    }
    rho
}

/// Haar-random member of the spectral orbit of diag(lambda):
/// Q diag Q^T over O(4) for the real ensemble, U diag U^dagger over U(4) for
/// the complex one. Conjugation orbits of O(4)/SO(4) (and U(4)/SU(4))
/// coincide, so the full groups are sampled.
pub fn orbit_point<R: Rng + ?Sized>(s: &Spectrum, ens: Ensemble, rng: &mut R) -> DensityMatrix {
    let lambda = s.values();
    match ens {
        Ensemble::Real => {
            let q: Mat4<f64> = haar_sample(rng);
            DensityMatrix::Real(conjugate_diag(&q, &lambda))
        }
        Ensemble::Complex => {
            let u: Mat4<Complex64> = haar_sample(rng);
            DensityMatrix::Complex(conjugate_diag(&u, &lambda))
        }
    }
}

/// Hot-path kernel: one Haar orbit point of `lambda`, tested for
/// separability, without constructing the public wrapper types.
#[inline]
pub(crate) fn orbit_point_is_separable<T: Scalar, R: Rng + ?Sized>(
    lambda: &[f64; 4],
    rng: &mut R,
) -> bool {
    let q: Mat4<T> = haar_sample(rng);
    let rho = conjugate_diag(&q, lambda);
    let pt = partial_transpose_mat(&rho);
    pt.det().re() >= -DET_BOUNDARY_EPS
}

/// Projector onto the Bell state (|00> + |11>)/sqrt(2); its entries are real,
/// so it exists in both ensembles.
pub fn bell_phi_plus(ens: Ensemble) -> DensityMatrix {
    let mut m = Mat4::<f64>::zero();
    m.0[0][0] = 0.5;
    m.0[0][3] = 0.5;
    m.0[3][0] = 0.5;
    m.0[3][3] = 0.5;
    match ens {
        Ensemble::Real => DensityMatrix::Real(m),
        Ensemble::Complex => {
            let mut c = Mat4::<Complex64>::zero();
            for i in 0..4 {
                for j in 0..4 {
                    c.0[i][j] = Complex64::new(m.0[i][j], 0.0);
                }
            }
            DensityMatrix::Complex(c)
        }
    }
}

/// Werner state p |phi+><phi+| + (1-p) I/4; separable exactly for p <= 1/3.
pub fn werner(p: f64, ens: Ensemble) -> DensityMatrix {
    let bell = bell_phi_plus(Ensemble::Real);
    let Mat4(b) = match bell {
        DensityMatrix::Real(m) => m,
        DensityMatrix::Complex(_) => unreachable!(),
    };
    let mut m = Mat4::<f64>::zero();
    for i in 0..4 {
        for j in 0..4 {
            m.0[i][j] = p * b[i][j];
        }
        m.0[i][i] += (1.0 - p) * 0.25;
    }
    match ens {
        Ensemble::Real => DensityMatrix::Real(m),
        Ensemble::Complex => {
            let mut c = Mat4::<Complex64>::zero();
            for i in 0..4 {
                for j in 0..4 {
                    c.0[i][j] = Complex64::new(m.0[i][j], 0.0);
                }
            }
            DensityMatrix::Complex(c)
        }
    }
}
