//! Seeded generators for test inputs. Every generator takes an explicit RNG
//! or seed; there is no global random state.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{c, ComplexMatrix, ZERO};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex normal: real and imaginary parts each `N(0, 1/2)`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn complex_normal_vec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| complex_normal(rng)).collect()
}

/// Ginibre matrix with i.i.d. standard complex normal entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| complex_normal(rng))
}

/// Orthonormalizes the first `n` Gaussian columns of a `rows`-dimensional
/// space by modified Gram-Schmidt. Returned as a list of columns.
pub fn orthonormal_columns<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    n: usize,
) -> Vec<Vec<Complex64>> {
    assert!(
        n <= rows,
        "cannot fit {n} orthonormal columns in dimension {rows}"
    );
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v = complex_normal_vec(rng, rows);
        for _ in 0..2 {
            for u in &cols {
                let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= proj * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= norm);
        cols.push(v);
    }
    cols
}

/// Haar-distributed unitary (Gram-Schmidt of a Ginibre matrix).
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let cols = orthonormal_columns(rng, dim, dim);
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Random `Hermitian` matrix with Gaussian entries.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ginibre(rng, dim).hermitian_part()
}

/// Random diagonal unitary.
pub fn diagonal_phases<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let phases: Vec<f64> = (0..dim)
        .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
        .collect();
    ComplexMatrix::from_fn(dim, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, phases[i])
        } else {
            ZERO
        }
    })
}
