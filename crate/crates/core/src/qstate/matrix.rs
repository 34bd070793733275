use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Matrix element scalar: `f64` for the real (beta = 1) ensemble,
/// `Complex64` for the complex (beta = 2) ensemble.
pub trait Scalar:
    Copy
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn zero() -> Self;
    fn one() -> Self;
    fn conj(self) -> Self;
    fn abs(self) -> f64;
    fn norm_sq(self) -> f64;
    fn re(self) -> f64;
    fn from_re(x: f64) -> Self;
    fn scale(self, x: f64) -> Self;
    /// One Ginibre entry: a standard normal per independent real component.
    fn ginibre<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn one() -> Self {
        1.0
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    #[inline]
    fn norm_sq(self) -> f64 {
        self * self
    }
    #[inline]
    fn re(self) -> f64 {
        self
    }
    #[inline]
    fn from_re(x: f64) -> Self {
        x
    }
    #[inline]
    fn scale(self, x: f64) -> Self {
        self * x
    }
    #[inline]
    fn ginibre<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Scalar for Complex64 {
    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    #[inline]
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    #[inline]
    fn abs(self) -> f64 {
        Complex64::norm(self)
    }
    #[inline]
    fn norm_sq(self) -> f64 {
        Complex64::norm_sqr(&self)
    }
    #[inline]
    fn re(self) -> f64 {
        self.re
    }
    #[inline]
    fn from_re(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn scale(self, x: f64) -> Self {
        Complex64::new(self.re * x, self.im * x)
    }
    #[inline]
    fn ginibre<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }
}

/// Dense 4x4 matrix over `f64` or `Complex64`, stored row-major on the stack.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Mat4<T>(pub [[T; 4]; 4]);

impl<T: Scalar> Mat4<T> {
    pub fn zero() -> Self {
        Mat4([[T::zero(); 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = T::one();
        }
        m
    }

    pub fn from_diag(d: &[f64; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = T::from_re(d[i]);
        }
        m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = self.0[j][i].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                for j in 0..4 {
                    out.0[i][j] += a * other.0[k][j];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> T {
        self.0[0][0] + self.0[1][1] + self.0[2][2] + self.0[3][3]
    }

    /// max_ij |a_ij - conj(a_ji)|: zero for an exactly Hermitian matrix.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for j in i..4 {
                let d = (self.0[i][j] - self.0[j][i].conj()).abs();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        let mut worst = 0.0_f64;
        for row in &self.0 {
            for &e in row {
                worst = worst.max(e.abs());
            }
        }
        worst
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> T {
        let mut a = self.0;
        let mut det = T::one();
        for k in 0..4 {
            let mut piv = k;
            let mut best = a[k][k].abs();
            for r in (k + 1)..4 {
                let v = a[r][k].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == 0.0 {
                return T::zero();
            }
            if piv != k {
                a.swap(piv, k);
                det = -det;
            }
            det *= a[k][k];
            for r in (k + 1)..4 {
                let f = a[r][k] / a[k][k];
                for c in (k + 1)..4 {
                    let sub = f * a[k][c];
                    a[r][c] -= sub;
                }
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_of_identity_and_diag() {
        assert_eq!(Mat4::<f64>::identity().det(), 1.0);
        let d = Mat4::<f64>::from_diag(&[0.4, 0.3, 0.2, 0.1]);
        assert!((d.det() - 0.0024).abs() < 1e-18);
    }

    #[test]
    fn det_sign_tracks_row_swaps() {
        let mut m = Mat4::<f64>::identity();
        m.0.swap(0, 1);
        assert_eq!(m.det(), -1.0);
    }

    #[test]
    fn complex_det_matches_hand_value() {
        // 2x2 block [[i, 1], [1, i]] embedded in identity: det = i*i - 1 = -2.
        let mut m = Mat4::<Complex64>::identity();
        m.0[0][0] = Complex64::new(0.0, 1.0);
        m.0[0][1] = Complex64::new(1.0, 0.0);
        m.0[1][0] = Complex64::new(1.0, 0.0);
        m.0[1][1] = Complex64::new(0.0, 1.0);
        let d = m.det();
        assert!((d - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn adjoint_matmul_consistency() {
        let m = Mat4([[Complex64::new(1.0, 2.0); 4]; 4]);
        let p = m.matmul(&m.adjoint());
        assert!(p.hermiticity_defect() < 1e-15);
    }
}
