use super::matrix::{Mat4, Scalar};
use super::JACOBI_OFFDIAG_TOL;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a 4x4 Hermitian (or real-symmetric) matrix by cyclic
/// two-sided Jacobi rotations, sorted descending.
///
/// Each rotation annihilates one off-diagonal entry a_pq with a unitary plane
/// rotation whose phase carries arg(a_pq); the sweep repeats until every
/// off-diagonal magnitude is below `JACOBI_OFFDIAG_TOL`. Unconditionally
/// stable at this size. The caller is responsible for Hermiticity; only the
/// upper triangle and real diagonal parts are read.
pub fn jacobi_hermitian_eigenvalues<T: Scalar>(m: &Mat4<T>) -> [f64; 4] {
    let mut a = *m;
    // Symmetrize once so round-off in the input cannot bias the sweep.
    for i in 0..4 {
        a.0[i][i] = T::from_re(a.0[i][i].re());
        for j in (i + 1)..4 {
            let avg = (a.0[i][j] + a.0[j][i].conj()).scale(0.5);
            a.0[i][j] = avg;
            a.0[j][i] = avg.conj();
        }
    }
    let scale = a.max_abs().max(1e-300);
    let tol = JACOBI_OFFDIAG_TOL * scale.max(1.0);

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0_f64;
        for p in 0..3 {
            for q in (p + 1)..4 {
                off = off.max(a.0[p][q].abs());
            }
        }
        if off < tol {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a.0[p][q];
                let mag = apq.abs();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq.scale(1.0 / mag); // e^{i arg(a_pq)}; +-1 in the real case
                let app = a.0[p][p].re();
                let aqq = a.0[q][q].re();
                let tau = (aqq - app) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                a.0[p][p] = T::from_re(app * c * c - 2.0 * mag * c * s + aqq * s * s);
                a.0[q][q] = T::from_re(app * s * s + 2.0 * mag * c * s + aqq * c * c);
                a.0[p][q] = T::zero();
                a.0[q][p] = T::zero();
                for j in 0..4 {
                    if j == p || j == q {
                        continue;
                    }
                    let ajp = a.0[j][p];
                    let ajq = a.0[j][q];
                    let new_jp = ajp.scale(c) - phase.conj() * ajq.scale(s);
                    let new_jq = phase * ajp.scale(s) + ajq.scale(c);
                    a.0[j][p] = new_jp;
                    a.0[p][j] = new_jp.conj();
                    a.0[j][q] = new_jq;
                    a.0[q][j] = new_jq.conj();
                }
            }
        }
    }

    let mut ev = [
        a.0[0][0].re(),
        a.0[1][1].re(),
        a.0[2][2].re(),
        a.0[3][3].re(),
    ];
    ev.sort_by(|x, y| y.partial_cmp(x).expect("eigenvalues must be finite"));
    ev
}
