//! Real 2x2 matrices and the rotation algebra built from `S`, `P`, `Q`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// Row-major 2x2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<T> {
    pub a11: T,
    pub a12: T,
    pub a21: T,
    pub a22: T,
}

impl<T: Scalar> Mat2<T> {
    pub const fn new(a11: T, a12: T, a21: T, a22: T) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn diag(d1: T, d2: T) -> Self {
        Self::new(d1, T::zero(), T::zero(), d2)
    }

    /// Generator of rotations, `[[0, 1], [-1, 0]]`.
    pub fn s() -> Self {
        Self::new(T::zero(), T::one(), -T::one(), T::zero())
    }

    /// `diag(1, -1)`.
    pub fn p() -> Self {
        Self::diag(T::one(), -T::one())
    }

    /// `[[0, 1], [1, 0]]`.
    pub fn q() -> Self {
        Self::new(T::zero(), T::one(), T::one(), T::zero())
    }

    /// `exp(t S) = [[cos t, sin t], [-sin t, cos t]]`.
    pub fn rotation(t: T) -> Self {
        let (s, c) = t.sin_cos();
        Self::new(c, s, -s, c)
    }

    /// Symmetric reflection `cos(θ) P + sin(θ) Q`.
    pub fn reflection(theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s, s, -c)
    }

    pub fn det(&self) -> T {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> T {
        self.a11 + self.a22
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a11, self.a21, self.a12, self.a22)
    }

    pub fn scale(&self, k: T) -> Self {
        Self::new(self.a11 * k, self.a12 * k, self.a21 * k, self.a22 * k)
    }

    pub fn apply(&self, v: [T; 2]) -> [T; 2] {
        [
            self.a11 * v[0] + self.a12 * v[1],
            self.a21 * v[0] + self.a22 * v[1],
        ]
    }

    pub fn col(&self, j: usize) -> [T; 2] {
        match j {
            0 => [self.a11, self.a21],
            _ => [self.a12, self.a22],
        }
    }

    pub fn entries(&self) -> [T; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn from_entries(e: [T; 4]) -> Self {
        Self::new(e[0], e[1], e[2], e[3])
    }

    pub fn frobenius(&self) -> T {
        self.entries()
            .iter()
            .fold(T::zero(), |acc, &v| acc + v * v)
            .sqrt()
    }

    /// Spectral norm (largest singular value).
    pub fn norm(&self) -> T {
        let f2 = self.entries().iter().fold(T::zero(), |acc, &v| acc + v * v);
        let d = self.det();
        let two = T::lit(2.0);
        let disc = (f2 * f2 - T::lit(4.0) * d * d).max(T::zero()).sqrt();
        ((f2 + disc) / two).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (*self - *other)
            .entries()
            .iter()
            .fold(T::zero(), |acc, &v| acc.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|v| v.is_finite())
    }

    /// Bit-for-bit equality, distinguishing signed zeros.
    pub fn bit_eq(&self, other: &Self) -> bool {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .all(|(a, b)| a.integer_decode() == b.integer_decode())
    }
}

impl<T: Scalar> Add for Mat2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a11 + o.a11, self.a12 + o.a12, self.a21 + o.a21, self.a22 + o.a22)
    }
}

impl<T: Scalar> Sub for Mat2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a11 - o.a11, self.a12 - o.a12, self.a21 - o.a21, self.a22 - o.a22)
    }
}

impl<T: Scalar> Neg for Mat2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a11, -self.a12, -self.a21, -self.a22)
    }
}

impl<T: Scalar> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

pub fn vec_norm<T: Scalar>(v: [T; 2]) -> T {
    v[0].hypot(v[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    type M = Mat2<f64>;

    #[test]
    fn generator_algebra_is_exact() {
        let (s, p, e) = (M::s(), M::p(), M::identity());
        assert_eq!(s * s, -e);
        assert_eq!(p * p, e);
        assert_eq!(p * s, -(s * p));
    }

    #[test]
    fn reflection_is_p_times_rotation() {
        for &t in &[0.0, 0.3, -1.7, 4.0] {
            let lhs = M::reflection(t);
            let rhs = M::p() * M::rotation(t);
            assert!(lhs.max_abs_diff(&rhs) < 1e-15);
        }
    }

    #[test]
    fn conjugated_reflection_shifts_angle() {
        let (phi, tau) = (0.4, 1.3);
        let lhs = M::rotation(-tau) * M::reflection(phi) * M::rotation(tau);
        assert!(lhs.max_abs_diff(&M::reflection(phi + 2.0 * tau)) < 1e-14);
    }

    #[test]
    fn spectral_norm_of_diag() {
        assert!((M::diag(3.0, -5.0).norm() - 5.0).abs() < 1e-14);
        assert!((M::rotation(0.7).norm() - 1.0).abs() < 1e-14);
    }
}
