//! 2x2 complex matrices with closed-form Hermitian eigendecomposition.
//!
//! Everything downstream works on qubits, so the matrix type is fixed at
//! dimension two and the eigenproblem is solved exactly from the trace and
//! determinant of the matrix.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{CoreError, Result};

/// Entrywise tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues below this are treated as the kernel in pseudoinverse splits.
pub const RANK_TOL: f64 = 1e-10;
/// Two eigenvalues closer than this are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// A 2x2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    entries: [[Complex64; 2]; 2],
}

impl ComplexMatrix {
    pub const DIM: usize = 2;

    pub fn new(entries: [[Complex64; 2]; 2]) -> Self {
        Self { entries }
    }

    pub fn zero() -> Self {
        Self::new([[Complex64::ZERO; 2]; 2])
    }

    pub fn identity() -> Self {
        Self::from_real([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn from_real(r: [[f64; 2]; 2]) -> Self {
        Self::new([
            [Complex64::new(r[0][0], 0.0), Complex64::new(r[0][1], 0.0)],
            [Complex64::new(r[1][0], 0.0), Complex64::new(r[1][1], 0.0)],
        ])
    }

    pub fn diag(a: f64, b: f64) -> Self {
        Self::from_real([[a, 0.0], [0.0, b]])
    }

    pub fn pauli_x() -> Self {
        Self::from_real([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn pauli_y() -> Self {
        Self::new([
            [Complex64::ZERO, Complex64::new(0.0, -1.0)],
            [Complex64::new(0.0, 1.0), Complex64::ZERO],
        ])
    }

    pub fn pauli_z() -> Self {
        Self::from_real([[1.0, 0.0], [0.0, -1.0]])
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i][j] = v;
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn determinant(&self) -> Complex64 {
        self.entries[0][0] * self.entries[1][1] - self.entries[0][1] * self.entries[1][0]
    }

    pub fn adjoint(&self) -> Self {
        let e = &self.entries;
        Self::new([
            [e[0][0].conj(), e[1][0].conj()],
            [e[0][1].conj(), e[1][1].conj()],
        ])
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for row in out.entries.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    /// Largest absolute deviation from Hermiticity over all entries.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                r = r.max((self.entries[i][j] - self.entries[j][i].conj()).norm());
            }
        }
        r
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_entry_norm(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Real part of tr(self * other).
    pub fn trace_product(&self, other: &Self) -> f64 {
        let mut t = Complex64::ZERO;
        for i in 0..2 {
            for j in 0..2 {
                t += self.entries[i][j] * other.entries[j][i];
            }
        }
        t.re
    }

    /// Smallest eigenvalue, assuming the matrix is Hermitian.
    pub fn min_eigenvalue(&self) -> f64 {
        let (lo, _) = hermitian_eigenvalues(self);
        lo
    }

    /// Largest eigenvalue, assuming the matrix is Hermitian.
    pub fn max_eigenvalue(&self) -> f64 {
        let (_, hi) = hermitian_eigenvalues(self);
        hi
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.entries[i][j] += rhs.entries[i][j];
            }
        }
        out
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.entries[i][j] -= rhs.entries[i][j];
            }
        }
        out
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> Self {
        let a = &self.entries;
        let b = &rhs.entries;
        let mut out = ComplexMatrix::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.entries[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    }
}

/// Eigenvalues (ascending pair) of a Hermitian 2x2 matrix from trace and determinant.
fn hermitian_eigenvalues(m: &ComplexMatrix) -> (f64, f64) {
    let mean = 0.5 * m.trace().re;
    let a = m.entry(0, 0).re;
    let d = m.entry(1, 1).re;
    let off = m.entry(0, 1).norm_sqr();
    let r = (0.25 * (a - d) * (a - d) + off).sqrt();
    (mean - r, mean + r)
}

/// Spectral decomposition of a Hermitian matrix: eigenvalues in descending
/// order with matching orthogonal projections.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: [f64; 2],
    pub projections: [ComplexMatrix; 2],
}

impl EigenDecomposition {
    /// Rebuilds the original matrix; used by reconstruction checks.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.projections[0].scale(self.eigenvalues[0]) + self.projections[1].scale(self.eigenvalues[1])
    }
}

/// Closed-form eigendecomposition of a Hermitian 2x2 matrix.
///
/// A degenerate spectrum returns the computational-basis projections so that
/// repeated runs are deterministic.
pub fn eigen_hermitian(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    let residual = m.hermiticity_residual();
    if residual > HERMITIAN_TOL {
        return Err(CoreError::NotHermitian { residual });
    }
    let (lo, hi) = hermitian_eigenvalues(m);
    if hi - lo < DEGENERACY_TOL {
        return Ok(EigenDecomposition {
            eigenvalues: [hi, lo],
            projections: [ComplexMatrix::diag(1.0, 0.0), ComplexMatrix::diag(0.0, 1.0)],
        });
    }
    // P_hi = (M - lo*I)/(hi - lo), P_lo = I - P_hi
    let p_hi = (*m - ComplexMatrix::identity().scale(lo)).scale(1.0 / (hi - lo));
    let p_lo = ComplexMatrix::identity() - p_hi;
    Ok(EigenDecomposition {
        eigenvalues: [hi, lo],
        projections: [p_hi, p_lo],
    })
}

/// Inverse square root on the support, zero on the kernel.
pub fn pseudo_inverse_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eigen_hermitian(m)?;
    let mut out = ComplexMatrix::zero();
    for (lam, proj) in eig.eigenvalues.iter().zip(eig.projections.iter()) {
        if *lam > RANK_TOL {
            out = out + proj.scale(1.0 / lam.sqrt());
        }
    }
    Ok(out)
}

/// Projection onto the support (eigenvalues above the rank tolerance).
pub fn support_projection(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eigen_hermitian(m)?;
    let mut out = ComplexMatrix::zero();
    for (lam, proj) in eig.eigenvalues.iter().zip(eig.projections.iter()) {
        if *lam > RANK_TOL {
            out = out + *proj;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_z_spectrum() {
        let eig = eigen_hermitian(&ComplexMatrix::pauli_z()).unwrap();
        assert_eq!(eig.eigenvalues, [1.0, -1.0]);
        assert!((eig.reconstruct() - ComplexMatrix::pauli_z()).max_entry_norm() < 1e-12);
    }

    #[test]
    fn degenerate_spectrum_uses_basis_projections() {
        let half = ComplexMatrix::identity().scale(0.5);
        let eig = eigen_hermitian(&half).unwrap();
        assert_eq!(eig.eigenvalues, [0.5, 0.5]);
        assert_eq!(eig.projections[0], ComplexMatrix::diag(1.0, 0.0));
        assert_eq!(eig.projections[1], ComplexMatrix::diag(0.0, 1.0));
    }

    #[test]
    fn pure_state_spectrum() {
        // 1/2 (I + 0.6 sx + 0.8 sz) is rank one.
        let m = (ComplexMatrix::identity()
            + ComplexMatrix::pauli_x().scale(0.6)
            + ComplexMatrix::pauli_z().scale(0.8))
        .scale(0.5);
        let eig = eigen_hermitian(&m).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!(eig.eigenvalues[1].abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = ComplexMatrix::zero();
        m.set(0, 1, Complex64::new(1.0, 0.0));
        assert!(matches!(
            eigen_hermitian(&m),
            Err(CoreError::NotHermitian { .. })
        ));
    }

    #[test]
    fn pseudo_inverse_sqrt_examples() {
        let half = ComplexMatrix::identity().scale(0.5);
        let r = pseudo_inverse_sqrt(&half).unwrap();
        assert!((r - ComplexMatrix::identity().scale(2.0_f64.sqrt())).max_entry_norm() < 1e-12);

        // kernel annihilated
        let p = ComplexMatrix::diag(1.0, 0.0);
        assert!((pseudo_inverse_sqrt(&p).unwrap() - p).max_entry_norm() < 1e-12);

        let m = ComplexMatrix::diag(0.75, 0.25);
        let r = pseudo_inverse_sqrt(&m).unwrap();
        assert!((r - ComplexMatrix::diag(2.0 / 3.0_f64.sqrt(), 2.0)).max_entry_norm() < 1e-12);
    }
}
