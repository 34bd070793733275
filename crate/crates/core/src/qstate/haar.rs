use num_complex::Complex64;
use rand::Rng;

use super::matrix::{Mat4, Scalar};

/// Ginibre draw: independent standard normals in every entry (both real
/// components for the complex case).
fn ginibre<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> Mat4<T> {
    let mut m = Mat4::zero();
    for i in 0..4 {
        for j in 0..4 {
            m.0[i][j] = T::ginibre(rng);
        }
    }
    m
}

/// Orthonormalizes the columns of `a` by Gram-Schmidt with a second
/// re-orthogonalization pass. The resulting R factor has a positive real
/// diagonal by construction, which is exactly the sign/phase convention under
/// which Q inherits the Haar distribution from a Ginibre input. Returns None
/// on (measure-zero) rank deficiency.
fn gram_schmidt_q<T: Scalar>(a: &Mat4<T>) -> Option<Mat4<T>> {
    let mut q = *a;
    for k in 0..4 {
        for _pass in 0..2 {
            for j in 0..k {
                let mut dot = T::zero();
                for i in 0..4 {
                    dot += q.0[i][j].conj() * q.0[i][k];
                }
                for i in 0..4 {
                    let sub = q.0[i][j] * dot;
                    q.0[i][k] -= sub;
                }
            }
        }
        let norm_sq: f64 = (0..4).map(|i| q.0[i][k].norm_sq()).sum();
        if norm_sq < 1e-280 {
            return None;
        }
        let inv = 1.0 / norm_sq.sqrt();
        for i in 0..4 {
            q.0[i][k] = q.0[i][k].scale(inv);
        }
    }
    Some(q)
}

pub(crate) fn haar_sample<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> Mat4<T> {
    loop {
        if let Some(q) = gram_schmidt_q(&ginibre(rng)) {
            return q;
        }
    }
}

/// Haar-distributed 4x4 real orthogonal matrix.
pub fn haar_orthogonal<R: Rng + ?Sized>(rng: &mut R) -> Mat4<f64> {
    haar_sample(rng)
}

/// Haar-distributed 4x4 complex unitary matrix.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R) -> Mat4<Complex64> {
    haar_sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unitarity_defect<T: Scalar>(q: &Mat4<T>) -> f64 {
        let p = q.adjoint().matmul(q);
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for j in 0..4 {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((p.0[i][j] - target).abs());
            }
        }
        worst
    }

    #[test]
    fn orthogonal_draws_satisfy_qtq_eq_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let q = haar_orthogonal(&mut rng);
            assert!(unitarity_defect(&q) < 1e-12);
        }
    }

    #[test]
    fn orthogonal_determinant_is_plus_minus_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..500 {
            let q = haar_orthogonal(&mut rng);
            assert!((q.det().abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unitary_draws_satisfy_udu_eq_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..2000 {
            let u = haar_unitary(&mut rng);
            assert!(unitarity_defect(&u) < 1e-12);
        }
    }

    // Column normalization plus Haar permutation symmetry force
    // E[|Q_jk|^2] = 1/4 in both ensembles.
    #[test]
    fn orthogonal_entry_second_moment() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let n = 1_000_000_u64;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let v = haar_orthogonal(&mut rng).0[0][0].norm_sq();
            sum += v;
            sum_sq += v * v;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        let se = (var / n as f64).sqrt();
        assert!(
            (mean - 0.25).abs() < 3.0 * se,
            "mean {mean} not within 3 SE ({se}) of 0.25"
        );
    }

    #[test]
    fn unitary_entry_second_moment() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000_u64;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let v = haar_unitary(&mut rng).0[1][2].norm_sq();
            sum += v;
            sum_sq += v * v;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        let se = (var / n as f64).sqrt();
        assert!(
            (mean - 0.25).abs() < 3.0 * se,
            "mean {mean} not within 3 SE ({se}) of 0.25"
        );
    }
}
