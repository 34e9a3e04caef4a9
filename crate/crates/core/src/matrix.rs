//! 2×2 complex matrices and the Pauli basis.
//!
//! Every eigenfunction value, potential, gauge matrix and expansion
//! coefficient in this crate is a [`ComplexMatrix2`]. Columns are handled as
//! plain `[Complex64; 2]` arrays (see [`Column`]).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

/// A column of a 2×2 matrix.
pub type Column = [Complex64; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, PartialEq, Default)]
pub struct ComplexMatrix2 {
    pub e11: Complex64,
    pub e12: Complex64,
    pub e21: Complex64,
    pub e22: Complex64,
}

impl fmt::Debug for ComplexMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.e11, self.e12, self.e21, self.e22
        )
    }
}

impl ComplexMatrix2 {
    pub const fn new(e11: Complex64, e12: Complex64, e21: Complex64, e22: Complex64) -> Self {
        Self { e11, e12, e21, e22 }
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn from_real(e11: f64, e12: f64, e21: f64, e22: f64) -> Self {
        Self::new(e11.into(), e12.into(), e21.into(), e22.into())
    }

    pub fn diag(d1: Complex64, d2: Complex64) -> Self {
        Self::new(d1, ZERO, ZERO, d2)
    }

    pub const fn sigma1() -> Self {
        Self::new(ZERO, ONE, ONE, ZERO)
    }

    pub const fn sigma2() -> Self {
        Self::new(ZERO, Complex64::new(0.0, -1.0), I, ZERO)
    }

    pub const fn sigma3() -> Self {
        Self::new(ONE, ZERO, ZERO, Complex64::new(-1.0, 0.0))
    }

    /// Matrix built from two columns.
    pub fn from_columns(c1: Column, c2: Column) -> Self {
        Self::new(c1[0], c2[0], c1[1], c2[1])
    }

    pub fn column(&self, index: usize) -> Column {
        match index {
            0 => [self.e11, self.e21],
            1 => [self.e12, self.e22],
            _ => panic!("column index {index} out of range for a 2x2 matrix"),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.e11 + self.e22
    }

    pub fn det(&self) -> Complex64 {
        self.e11 * self.e22 - self.e12 * self.e21
    }

    /// Inverse, or `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == ZERO || !d.is_finite() {
            return None;
        }
        let r = d.inv();
        Some(Self::new(
            self.e22 * r,
            -self.e12 * r,
            -self.e21 * r,
            self.e11 * r,
        ))
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::new(self.e11.conj(), self.e12.conj(), self.e21.conj(), self.e22.conj())
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.e11, self.e21, self.e12, self.e22)
    }

    pub fn adjoint(&self) -> Self {
        self.conj().transpose()
    }

    /// `σ₂ A σ₂`.
    pub fn sigma2_conjugate(&self) -> Self {
        let s2 = Self::sigma2();
        s2 * *self * s2
    }

    /// Diagonal part `A⁽ᵈ⁾`.
    pub fn diagonal_part(&self) -> Self {
        Self::new(self.e11, ZERO, ZERO, self.e22)
    }

    /// Off-diagonal part `A⁽ᵒ⁾`.
    pub fn off_diagonal_part(&self) -> Self {
        Self::new(ZERO, self.e12, self.e21, ZERO)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.e11 * s, self.e12 * s, self.e21 * s, self.e22 * s)
    }

    pub fn mul_column(&self, v: &Column) -> Column {
        [
            self.e11 * v[0] + self.e12 * v[1],
            self.e21 * v[0] + self.e22 * v[1],
        ]
    }

    /// `[σ₃, A]`.
    pub fn commutator_sigma3(&self) -> Self {
        Self::new(ZERO, self.e12 * 2.0, -self.e21 * 2.0, ZERO)
    }

    /// Frobenius norm, `|A|² = Σ|Aᵢⱼ|²`.
    pub fn norm(&self) -> f64 {
        (self.e11.norm_sqr() + self.e12.norm_sqr() + self.e21.norm_sqr() + self.e22.norm_sqr())
            .sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.e11
            .norm()
            .max(self.e12.norm())
            .max(self.e21.norm())
            .max(self.e22.norm())
    }

    pub fn is_finite(&self) -> bool {
        self.e11.is_finite() && self.e12.is_finite() && self.e21.is_finite() && self.e22.is_finite()
    }

    /// Real rotation `[[cos φ, −sin φ], [sin φ, cos φ]]`.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::from_real(c, -s, s, c)
    }

    /// `exp(A)` in closed form.
    ///
    /// Writes `A = μI + B` with `B` traceless so that `B² = δ²I`; the two
    /// exponentials `e^{μ±δ}` are formed separately so that large `|Re δ|`
    /// does not overflow an intermediate `cosh`.
    pub fn exp(&self) -> Self {
        let mu = self.trace() * 0.5;
        let b = *self - Self::identity().scale(mu);
        let delta = (-b.det()).sqrt();
        let ep = (mu + delta).exp();
        let em = (mu - delta).exp();
        let cosh = (ep + em) * 0.5;
        let sinh_over = if delta.norm() < 1e-6 {
            // sinh(δ)/δ ≈ 1 + δ²/6 + δ⁴/120
            let d2 = delta * delta;
            mu.exp() * (ONE + d2 / 6.0 + d2 * d2 / 120.0)
        } else {
            (ep - em) * 0.5 / delta
        };
        Self::identity().scale(cosh) + b.scale(sinh_over)
    }
}

impl Add for ComplexMatrix2 {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Self::new(self.e11 + r.e11, self.e12 + r.e12, self.e21 + r.e21, self.e22 + r.e22)
    }
}

impl AddAssign for ComplexMatrix2 {
    fn add_assign(&mut self, r: Self) {
        *self = *self + r;
    }
}

impl Sub for ComplexMatrix2 {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Self::new(self.e11 - r.e11, self.e12 - r.e12, self.e21 - r.e21, self.e22 - r.e22)
    }
}

impl Neg for ComplexMatrix2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.e11, -self.e12, -self.e21, -self.e22)
    }
}

impl Mul for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        Self::new(
            self.e11 * r.e11 + self.e12 * r.e21,
            self.e11 * r.e12 + self.e12 * r.e22,
            self.e21 * r.e11 + self.e22 * r.e21,
            self.e21 * r.e12 + self.e22 * r.e22,
        )
    }
}

impl Mul<Complex64> for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, s: Complex64) -> Self {
        self.scale(s)
    }
}

impl Mul<f64> for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }
}

/// Euclidean norm of a column.
pub fn column_norm(a: &Column) -> f64 {
    (a[0].norm_sqr() + a[1].norm_sqr()).sqrt()
}

/// Unit column `e_index`.
pub fn unit_column(index: usize) -> Column {
    match index {
        0 => [ONE, ZERO],
        1 => [ZERO, ONE],
        _ => panic!("column index {index} out of range"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_algebra() {
        let (s1, s2, s3) = (
            ComplexMatrix2::sigma1(),
            ComplexMatrix2::sigma2(),
            ComplexMatrix2::sigma3(),
        );
        let id = ComplexMatrix2::identity();
        for s in [s1, s2, s3] {
            assert_eq!(s * s, id);
        }
        // σ₁σ₂ = iσ₃ and cyclic
        assert_eq!(s1 * s2, s3.scale(I));
        assert_eq!(s2 * s3, s1.scale(I));
        assert_eq!(s3 * s1, s2.scale(I));
    }

    #[test]
    fn inverse_and_det() {
        let a = ComplexMatrix2::new(c(1.0, 2.0), c(0.5, -1.0), c(-3.0, 0.25), c(2.0, 2.0));
        let inv = a.inverse().unwrap();
        assert!((a * inv - ComplexMatrix2::identity()).norm() < 1e-14);
        assert!(((a * inv).det() - ONE).norm() < 1e-14);
        assert!(ComplexMatrix2::zero().inverse().is_none());
    }

    #[test]
    fn commutator_with_sigma3() {
        let a = ComplexMatrix2::new(c(1.0, 2.0), c(0.5, -1.0), c(-3.0, 0.25), c(2.0, 2.0));
        let s3 = ComplexMatrix2::sigma3();
        assert!((a.commutator_sigma3() - (s3 * a - a * s3)).norm() < 1e-15);
    }

    #[test]
    fn exponential_matches_series() {
        let a = ComplexMatrix2::new(c(0.1, 0.3), c(-0.2, 0.05), c(0.4, -0.1), c(-0.3, 0.2));
        let mut term = ComplexMatrix2::identity();
        let mut sum = term;
        for n in 1..30 {
            term = term * a * (1.0 / n as f64);
            sum += term;
        }
        assert!((a.exp() - sum).norm() < 1e-14);
        // nilpotent: exp(N) = I + N
        let n = ComplexMatrix2::new(ZERO, c(2.0, 1.0), ZERO, ZERO);
        assert!((n.exp() - (ComplexMatrix2::identity() + n)).norm() < 1e-15);
        // large diagonal entries do not overflow in the other entry
        let d = ComplexMatrix2::diag(c(-800.0, 0.0), c(0.0, 3.0));
        let e = d.exp();
        assert!(e.is_finite());
        assert!((e.e22 - c(0.0, 3.0).exp()).norm() < 1e-14);
    }

    #[test]
    fn rotation_is_special_orthogonal() {
        for k in 0..12 {
            let r = ComplexMatrix2::rotation(0.37 * k as f64);
            assert!((r.transpose() * r - ComplexMatrix2::identity()).norm() < 1e-15);
            assert!((r.det() - ONE).norm() < 1e-15);
        }
    }
}
