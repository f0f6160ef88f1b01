//! Minimal complex 2×2 matrix arithmetic.
//!
//! The Dirac algebra here never needs more than products, determinants and
//! adjoints of 2×2 blocks, so a fixed array type beats pulling in a linear
//! algebra crate.

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub e: [[Complex64; 2]; 2],
}

impl Mat2 {
    pub fn new(e: [[Complex64; 2]; 2]) -> Self {
        Self { e }
    }

    pub fn identity() -> Self {
        Self::from_real([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn from_real(r: [[f64; 2]; 2]) -> Self {
        Self {
            e: [
                [r[0][0].into(), r[0][1].into()],
                [r[1][0].into(), r[1][1].into()],
            ],
        }
    }

    /// Pauli σx.
    pub fn sigma_x() -> Self {
        Self::from_real([[0.0, 1.0], [1.0, 0.0]])
    }

    /// Pauli σz.
    pub fn sigma_z() -> Self {
        Self::from_real([[1.0, 0.0], [0.0, -1.0]])
    }

    pub fn det(&self) -> Complex64 {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            e: [
                [self.e[0][0].conj(), self.e[1][0].conj()],
                [self.e[0][1].conj(), self.e[1][1].conj()],
            ],
        }
    }

    /// Elementwise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Self {
            e: [
                [self.e[0][0].conj(), self.e[0][1].conj()],
                [self.e[1][0].conj(), self.e[1][1].conj()],
            ],
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut e = self.e;
        for row in &mut e {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        Self { e }
    }

    pub fn mul_vec(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.e[0][0] * v[0] + self.e[0][1] * v[1],
            self.e[1][0] * v[0] + self.e[1][1] * v[1],
        ]
    }

    pub fn max_norm(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut out = [[Complex64::default(); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.e[i][0] * rhs.e[0][j] + self.e[i][1] * rhs.e[1][j];
            }
        }
        Mat2 { e: out }
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = self.e;
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v += rhs.e[i][j];
            }
        }
        Mat2 { e: out }
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let mut out = self.e;
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v -= rhs.e[i][j];
            }
        }
        Mat2 { e: out }
    }
}
