//! Minimal 2×2 complex matrix arithmetic.

use num_complex::Complex64;
use std::ops::{Add, Mul};

pub type C64 = Complex64;

/// Row-major 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[C64::new(0.0, 0.0); 2]; 2]);
    pub const IDENTITY: Mat2 = Mat2([
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
    ]);

    pub fn new(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        Mat2([[m00, m01], [m10, m11]])
    }

    /// Matrix with real entries.
    pub fn real(m00: f64, m01: f64, m10: f64, m11: f64) -> Self {
        Mat2([
            [C64::new(m00, 0.0), C64::new(m01, 0.0)],
            [C64::new(m10, 0.0), C64::new(m11, 0.0)],
        ])
    }

    pub fn pauli_x() -> Self {
        Self::real(0.0, 1.0, 1.0, 0.0)
    }

    pub fn pauli_y() -> Self {
        Mat2::new(
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        )
    }

    pub fn pauli_z() -> Self {
        Self::real(1.0, 0.0, 0.0, -1.0)
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[row][col]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2::new(
            m[0][0].conj(),
            m[1][0].conj(),
            m[0][1].conj(),
            m[1][1].conj(),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (Mat2::pauli_x(), Mat2::pauli_y(), Mat2::pauli_z());
        for p in [x, y, z] {
            assert!((p * p).max_abs_diff(&Mat2::IDENTITY) < 1e-15);
            assert!(p.adjoint().max_abs_diff(&p) < 1e-15);
        }
        // XY = iZ
        let iz = Mat2::new(
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
        );
        assert!((x * y).max_abs_diff(&iz) < 1e-15);
    }
}
