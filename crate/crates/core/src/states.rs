//! Validated density matrices and qubit Bloch-sphere constructors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::{hermitian_eig, EigenSystem, HERMITIAN_TOL, PSD_TOL};
use crate::error::{Error, Result};
use crate::matrix::{sigma, ComplexMatrix};
use crate::random;

pub const TRACE_TOL: f64 = 1e-10;
pub const BLOCH_TOL: f64 = 1e-12;

/// Real 3-vector parameterizing the qubit state `(I + r·σ) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct BlochVector {
    r: [f64; 3],
}

impl BlochVector {
    pub fn new(r1: f64, r2: f64, r3: f64) -> Result<Self> {
        let r = [r1, r2, r3];
        let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm > 1.0 + BLOCH_TOL {
            return Err(Error::BlochOutOfBall { norm });
        }
        Ok(Self { r })
    }

    pub const ORIGIN: BlochVector = BlochVector { r: [0.0; 3] };

    pub fn components(&self) -> [f64; 3] {
        self.r
    }

    pub fn r1(&self) -> f64 {
        self.r[0]
    }

    pub fn r2(&self) -> f64 {
        self.r[1]
    }

    pub fn r3(&self) -> f64 {
        self.r[2]
    }

    pub fn norm_sq(&self) -> f64 {
        self.r.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `((1 - |r|)/2, (1 + |r|)/2)`, ascending. `|r|` is capped at 1 so the
    /// tolerance band above the sphere does not produce a negative eigenvalue.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let n = self.norm().min(1.0);
        ((1.0 - n) / 2.0, (1.0 + n) / 2.0)
    }

    /// The qubit density matrix `(I + r1 σ1 + r2 σ2 + r3 σ3) / 2`.
    pub fn matrix(&self) -> ComplexMatrix {
        let mut m = sigma(0);
        for (j, &rj) in self.r.iter().enumerate() {
            m += &sigma(j + 1).scale_real(rj);
        }
        m.scale_real(0.5)
    }
}

impl TryFrom<[f64; 3]> for BlochVector {
    type Error = Error;

    fn try_from(r: [f64; 3]) -> Result<Self> {
        Self::new(r[0], r[1], r[2])
    }
}

impl From<BlochVector> for [f64; 3] {
    fn from(b: BlochVector) -> Self {
        b.r
    }
}

/// Qubit eigenvalues `(1 ∓ |r|) / 2`.
pub fn qubit_eigenvalues(r: &BlochVector) -> (f64, f64) {
    r.eigenvalues()
}

/// A quantum state: Hermitian, positive semidefinite, unit trace. The
/// spectral decomposition is computed once at construction and reused for
/// every fractional power.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    eig: EigenSystem,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let herm = matrix.hermiticity_residual();
        if herm > HERMITIAN_TOL {
            return Err(Error::NotHermitian { distance: herm });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::BadTrace { trace: trace.re });
        }
        let eig = hermitian_eig(&matrix)?;
        if eig.min_eigenvalue() < -PSD_TOL {
            return Err(Error::NotPositive {
                eigenvalue: eig.min_eigenvalue(),
            });
        }
        Ok(Self { matrix, eig })
    }

    /// Normalizes a positive semidefinite matrix by its trace first.
    pub fn normalized(matrix: ComplexMatrix) -> Result<Self> {
        let tr = matrix.trace().re;
        if tr.abs() < f64::MIN_POSITIVE {
            return Err(Error::BadTrace { trace: tr });
        }
        Self::new(matrix.scale_real(1.0 / tr))
    }

    pub fn from_bloch(r: &BlochVector) -> Self {
        Self::new(r.matrix()).expect("Bloch ball states are valid density matrices")
    }

    /// Projector onto the normalized ket.
    pub fn from_ket(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let unit: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&unit, &unit))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
            .expect("I/d is a valid state")
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::diag_real(probs))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> &EigenSystem {
        &self.eig
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `ρ^t` for `t ∈ [0, 1]`, with `ρ^0 = I`.
    pub fn power(&self, t: f64) -> Result<ComplexMatrix> {
        self.eig.power(t)
    }

    /// Reads back `r_j = Tr(ρ σ_j)`.
    pub fn bloch(&self) -> Result<[f64; 3]> {
        if self.dim() != 2 {
            return Err(Error::NotQubit(self.dim()));
        }
        Ok([1, 2, 3].map(|j| self.matrix.trace_product(&sigma(j)).re))
    }

    /// `t ρ1 + (1 - t) ρ2`.
    pub fn mixture(t: f64, a: &Self, b: &Self) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        Self::new(&a.matrix.scale_real(t) + &b.matrix.scale_real(1.0 - t))
    }

    /// Product state `ρ_a ⊗ ρ_b`.
    pub fn tensor(&self, other: &Self) -> Self {
        Self::new(self.matrix.kron(&other.matrix)).expect("product of states is a state")
    }
}

/// Hilbert-Schmidt random state `G G^dag / Tr(G G^dag)` with Ginibre `G`.
pub fn random_density(dim: usize, seed: u64) -> DensityMatrix {
    random_density_with(&mut random::rng(seed), dim)
}

pub fn random_density_with<R: rand::Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = random::ginibre(rng, dim);
    let ggd = (&g * &g.dagger()).hermitian_part();
    DensityMatrix::normalized(ggd).expect("G G^dag is positive with nonzero trace")
}

/// Projector onto a normalized Gaussian vector.
pub fn random_pure(dim: usize, seed: u64) -> DensityMatrix {
    random_pure_with(&mut random::rng(seed), dim)
}

pub fn random_pure_with<R: rand::Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let psi = random::complex_normal_vec(rng, dim);
    DensityMatrix::from_ket(&psi).expect("Gaussian vector is nonzero")
}

/// Uniformly distributed direction scaled to `norm`.
pub fn random_bloch_with<R: rand::Rng + ?Sized>(rng: &mut R, norm: f64) -> BlochVector {
    use rand_distr::StandardNormal;
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            let s = norm / n;
            return BlochVector::new(v[0] * s, v[1] * s, v[2] * s).expect("scaled into the ball");
        }
    }
}
