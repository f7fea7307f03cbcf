//! Hermitian eigendecomposition and the functional calculus built on it.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::{c, ComplexMatrix, ZERO};

/// Largest Frobenius distance to the adjoint accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in `[-PSD_TOL, 0)` are treated as zero; anything lower is an error.
pub const PSD_TOL: f64 = 1e-10;

/// Eigenvalues at or below this magnitude are exact zeros for powering.
/// `x^t` is unbounded in slope near 0, so rounding noise on a rank-deficient
/// spectrum (order 1e-17) would otherwise leak into small powers.
pub const ZERO_EIGENVALUE: f64 = 1e-14;

/// `x^t` on the nonnegative reals with `0^0 = 1` and `0^t = 0` for `t > 0`.
pub fn pow_psd(x: f64, t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else if x <= ZERO_EIGENVALUE {
        0.0
    } else if t == 1.0 {
        x
    } else {
        x.powf(t)
    }
}

/// Spectral decomposition `A = U diag(eigenvalues) U^dag` of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors as columns.
    pub eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    /// `U diag(f(λ)) U^dag`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let u = &self.eigenvectors;
        let w: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            let mut acc = ZERO;
            for k in 0..n {
                if w[k] != 0.0 {
                    acc += u[(i, k)] * u[(j, k)].conj() * w[k];
                }
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| l)
    }

    /// Fractional power of a positive semidefinite spectrum.
    pub fn power(&self, t: f64) -> Result<ComplexMatrix> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::BadExponent(t));
        }
        let min = self.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::NotPositive { eigenvalue: min });
        }
        Ok(self.map(|l| pow_psd(l, t)))
    }
}

/// Diagonalizes a Hermitian matrix with nalgebra's symmetric eigensolver.
///
/// The input is symmetrized first. Eigenpairs are sorted ascending, ties by
/// solver order, so the output depends only on the input bits.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<EigenSystem> {
    let residual = a.hermiticity_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian { distance: residual });
    }
    let n = a.dim();
    let h = a.hermitian_part();
    let eig = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            c(h[(i, i)].re, 0.0)
        } else {
            h[(i, j)]
        }
    })
    .symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        eig.eigenvalues[x]
            .total_cmp(&eig.eigenvalues[y])
            .then(x.cmp(&y))
    });
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// `rho^t` through the spectral decomposition, with `0^0 = 1`.
pub fn matrix_power(rho: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    hermitian_eig(rho)?.power(t)
}
