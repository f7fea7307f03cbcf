//! Completely positive, trace-nonincreasing maps in Kraus form.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::eigen::hermitian_eig;
use crate::error::{Error, Result};
use crate::matrix::{c, sigma, ComplexMatrix, ONE, ZERO};
use crate::random;

/// Tolerance on `||Σ K†K - I||` and `||Σ K K† - I||`.
pub const CHANNEL_TOL: f64 = 1e-10;
pub const UNITARY_TOL: f64 = 1e-10;
const PROB_TOL: f64 = 1e-12;

/// `Φ(ρ) = Σ K_i ρ K_i†`, stored as its ordered Kraus list.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    ops: Vec<ComplexMatrix>,
    label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChannelFlags {
    pub trace_preserving: bool,
    pub unital: bool,
    pub trace_nonincreasing: bool,
}

impl KrausChannel {
    /// Validates equal dimensions and `Σ K†K ≤ I`.
    pub fn new(ops: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        let first = ops.first().ok_or(Error::EmptyChannel)?;
        let dim = first.dim();
        if let Some(bad) = ops.iter().find(|k| k.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        let ch = Self {
            dim,
            ops,
            label: label.into(),
        };
        let top = ch.max_eigenvalue_of_completeness();
        if top > 1.0 + CHANNEL_TOL {
            return Err(Error::TraceIncreasing(top));
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            ops: vec![ComplexMatrix::identity(dim)],
            label: "identity".into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    fn check_dim(&self, m: &ComplexMatrix) -> Result<()> {
        if m.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.dim(),
            });
        }
        Ok(())
    }

    /// `Σ K_i X K_i†`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(x)?;
        let mut out = ComplexMatrix::zeros(self.dim);
        for k in &self.ops {
            out += &k.conjugate(x);
        }
        Ok(out)
    }

    /// Dual map `Σ K_i† X K_i`.
    pub fn adjoint_apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(x)?;
        let mut out = ComplexMatrix::zeros(self.dim);
        for k in &self.ops {
            out += &(&(&k.dagger() * x) * k);
        }
        Ok(out)
    }

    /// `Σ K†K`.
    pub fn completeness(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for k in &self.ops {
            out += &(&k.dagger() * k);
        }
        out
    }

    /// `Σ K K†`, which equals `Φ(I)`.
    pub fn unitality(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for k in &self.ops {
            out += &(k * &k.dagger());
        }
        out
    }

    fn max_eigenvalue_of_completeness(&self) -> f64 {
        hermitian_eig(&self.completeness().hermitian_part())
            .expect("K†K sums are Hermitian")
            .max_eigenvalue()
    }

    pub fn validate(&self) -> ChannelFlags {
        let id = ComplexMatrix::identity(self.dim);
        ChannelFlags {
            trace_preserving: self.completeness().distance(&id) <= CHANNEL_TOL,
            unital: self.unitality().distance(&id) <= CHANNEL_TOL,
            trace_nonincreasing: self.max_eigenvalue_of_completeness() <= 1.0 + CHANNEL_TOL,
        }
    }

    /// Choi matrix `Σ_{kl} |k><l| ⊗ Φ(|k><l|)`.
    pub fn choi(&self) -> ComplexMatrix {
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d * d);
        for k in 0..d {
            for l in 0..d {
                let ekl =
                    ComplexMatrix::from_fn(d, |i, j| if i == k && j == l { ONE } else { ZERO });
                let img = self.apply(&ekl).expect("dimensions agree");
                for i in 0..d {
                    for j in 0..d {
                        out[(k * d + i, l * d + j)] = img[(i, j)];
                    }
                }
            }
        }
        out
    }

    /// Kraus list `{K_i ⊗ I_b}` of `Φ ⊗ 1`.
    pub fn tensor_with_identity(&self, dim_b: usize) -> Self {
        let id = ComplexMatrix::identity(dim_b);
        Self {
            dim: self.dim * dim_b,
            ops: self.ops.iter().map(|k| k.kron(&id)).collect(),
            label: format!("{} ⊗ id{}", self.label, dim_b),
        }
    }

    /// Representation change `K'_j = Σ_i W_ji K_i` for an isometry `W`.
    pub fn remix(&self, w: &Isometry) -> Result<Self> {
        if w.cols != self.ops.len() {
            return Err(Error::RemixShape {
                expected: self.ops.len(),
                found: w.cols,
            });
        }
        let ops = (0..w.rows)
            .map(|j| {
                let mut acc = ComplexMatrix::zeros(self.dim);
                for (i, k) in self.ops.iter().enumerate() {
                    acc += &k.scale(w.get(j, i));
                }
                acc
            })
            .collect();
        Ok(Self {
            dim: self.dim,
            ops,
            label: self.label.clone(),
        })
    }
}

/// Pauli channel `Σ_j p_j σ_j ρ σ_j`.
pub fn pauli_channel(p0: f64, p1: f64, p2: f64, p3: f64) -> Result<KrausChannel> {
    let probs = [p0, p1, p2, p3];
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::InvalidProbabilities(format!(
            "negative entry in {probs:?}"
        )));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > PROB_TOL {
        return Err(Error::InvalidProbabilities(format!(
            "{probs:?} sums to {total}"
        )));
    }
    let ops = probs
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(j, &p)| sigma(j).scale_real(p.sqrt()));
    let mut ops: Vec<_> = ops.collect();
    if ops.is_empty() {
        ops.push(ComplexMatrix::zeros(2));
    }
    KrausChannel::new(ops, "pauli")
}

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    hi: f64,
    range: &'static str,
) -> Result<()> {
    if !(0.0..=hi).contains(&value) {
        return Err(Error::ParameterOutOfRange { name, value, range });
    }
    Ok(())
}

/// `pauli_channel(1 - 3p, p, p, p)`, `p ∈ [0, 1/3]`.
pub fn depolarizing(p: f64) -> Result<KrausChannel> {
    check_range("p", p, 1.0 / 3.0 + PROB_TOL, "[0, 1/3]")?;
    let p = p.min(1.0 / 3.0);
    Ok(pauli_channel((1.0 - 3.0 * p).max(0.0), p, p, p)?.with_label("depolarizing"))
}

pub fn bit_flip(p: f64) -> Result<KrausChannel> {
    check_range("p", p, 1.0, "[0, 1]")?;
    Ok(pauli_channel(1.0 - p, p, 0.0, 0.0)?.with_label("bit_flip"))
}

pub fn phase_flip(p: f64) -> Result<KrausChannel> {
    check_range("p", p, 1.0, "[0, 1]")?;
    Ok(pauli_channel(1.0 - p, 0.0, 0.0, p)?.with_label("phase_flip"))
}

/// `K1 = |0><0| + √(1-q)|1><1|`, `K2 = √q |1><1|`.
pub fn amplitude_damping_unital(q: f64) -> Result<KrausChannel> {
    check_range("q", q, 1.0, "[0, 1]")?;
    let k1 = ComplexMatrix::diag_real(&[1.0, (1.0 - q).sqrt()]);
    let k2 = ComplexMatrix::diag_real(&[0.0, q.sqrt()]);
    KrausChannel::new(vec![k1, k2], "ad_unital")
}

/// `K1 = |0><0| + √(1-q)|1><1|`, `K2 = √q |0><1|`.
pub fn amplitude_damping_nonunital(q: f64) -> Result<KrausChannel> {
    check_range("q", q, 1.0, "[0, 1]")?;
    let k1 = ComplexMatrix::diag_real(&[1.0, (1.0 - q).sqrt()]);
    let mut k2 = ComplexMatrix::zeros(2);
    k2[(0, 1)] = c(q.sqrt(), 0.0);
    KrausChannel::new(vec![k1, k2], "ad_nonunital")
}

/// Finite-group twirl `(1/|G|) Σ_g U(g) ρ U(g)†`.
pub fn group_twirl(unitaries: &[ComplexMatrix]) -> Result<KrausChannel> {
    if unitaries.is_empty() {
        return Err(Error::EmptyChannel);
    }
    let weight = 1.0 / (unitaries.len() as f64).sqrt();
    for (index, u) in unitaries.iter().enumerate() {
        if u.dim() != unitaries[0].dim() {
            return Err(Error::DimensionMismatch {
                expected: unitaries[0].dim(),
                found: u.dim(),
            });
        }
        let residual = u.unitarity_residual();
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary { index, residual });
        }
    }
    KrausChannel::new(
        unitaries.iter().map(|u| u.scale_real(weight)).collect(),
        "twirl",
    )
}

/// Twirl over `{I, σ3}`.
pub fn twirl_z2() -> KrausChannel {
    group_twirl(&[sigma(0), sigma(3)])
        .expect("Paulis are unitary")
        .with_label("twirl_z2")
}

/// Twirl over the Pauli group modulo phases.
pub fn twirl_pauli() -> KrausChannel {
    group_twirl(&(0..4).map(sigma).collect::<Vec<_>>())
        .expect("Paulis are unitary")
        .with_label("twirl_pauli")
}

/// Trace-preserving channel with `n_ops` Kraus operators cut from a random
/// isometry `C^d → C^{d n}`.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, dim: usize, n_ops: usize) -> KrausChannel {
    let w = Isometry::random(rng, dim * n_ops, dim);
    let ops = (0..n_ops)
        .map(|i| ComplexMatrix::from_fn(dim, |r, c| w.get(i * dim + r, c)))
        .collect();
    KrausChannel::new(ops, "random").expect("isometry blocks form a channel")
}

/// Mixed-unitary channel `Σ p_i U_i ρ U_i†` with Haar unitaries; unital and
/// trace-preserving.
pub fn random_unital_channel<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    n_ops: usize,
) -> KrausChannel {
    let weights: Vec<f64> = (0..n_ops).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let ops = weights
        .iter()
        .map(|w| random::haar_unitary(rng, dim).scale_real((w / total).sqrt()))
        .collect();
    KrausChannel::new(ops, "random_unital").expect("mixed-unitary channels are valid")
}

/// An `m x n` matrix with `W†W = I_n`, used to remix Kraus lists.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Isometry {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols || cols == 0 {
            return Err(Error::NotSquare { found: data.len() });
        }
        let w = Self { rows, cols, data };
        let residual = w.residual();
        if residual > CHANNEL_TOL {
            return Err(Error::NotIsometry { residual });
        }
        Ok(w)
    }

    pub fn from_unitary(u: &ComplexMatrix) -> Result<Self> {
        Self::new(u.dim(), u.dim(), u.as_slice().to_vec())
    }

    /// Gaussian columns orthonormalized; Haar on the Stiefel manifold.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Self {
        let columns = random::orthonormal_columns(rng, rows, cols);
        let mut data = vec![ZERO; rows * cols];
        for (j, col) in columns.iter().enumerate() {
            for (i, z) in col.iter().enumerate() {
                data[i * cols + j] = *z;
            }
        }
        Self { rows, cols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    fn residual(&self) -> f64 {
        let mut acc = 0.0;
        for a in 0..self.cols {
            for b in 0..self.cols {
                let dot: Complex64 = (0..self.rows)
                    .map(|i| self.get(i, a).conj() * self.get(i, b))
                    .sum();
                let target = if a == b { ONE } else { ZERO };
                acc += (dot - target).norm_sqr();
            }
        }
        acc.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::I;
    use crate::states::{random_density, BlochVector};

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        a.distance(b) < tol
    }

    #[test]
    fn identity_channel_fixes_states() {
        let rho = random_density(3, 4);
        let out = KrausChannel::identity(3).apply(rho.matrix()).unwrap();
        assert!(close(&out, rho.matrix(), 1e-15));
    }

    #[test]
    fn uniform_pauli_mixture_fully_depolarizes() {
        let ch = depolarizing(0.25).unwrap();
        for seed in 0..5 {
            let out = ch.apply(random_density(2, seed).matrix()).unwrap();
            assert!(close(
                &out,
                &ComplexMatrix::identity(2).scale_real(0.5),
                1e-15
            ));
        }
    }

    #[test]
    fn phase_flip_shrinks_transverse_bloch() {
        let p = 0.3;
        let r = BlochVector::new(0.4, -0.5, 0.6).unwrap();
        let out = phase_flip(p).unwrap().apply(&r.matrix()).unwrap();
        let want = BlochVector::new((1.0 - 2.0 * p) * 0.4, (1.0 - 2.0 * p) * -0.5, 0.6)
            .unwrap()
            .matrix();
        assert!(close(&out, &want, 1e-15));
    }

    #[test]
    fn apply_rejects_wrong_dimension() {
        let err = bit_flip(0.1)
            .unwrap()
            .apply(&ComplexMatrix::identity(3))
            .unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn adjoint_examples() {
        let id = ComplexMatrix::identity(2);
        assert!(close(
            &depolarizing(0.2).unwrap().adjoint_apply(&id).unwrap(),
            &id,
            1e-15
        ));
        assert!(close(
            &amplitude_damping_nonunital(0.37)
                .unwrap()
                .adjoint_apply(&id)
                .unwrap(),
            &id,
            1e-15
        ));

        // Tr(X Φ(ρ)) = Tr(Φ†(X) ρ)
        let mut rng = random::rng(99);
        let ch = amplitude_damping_nonunital(0.6).unwrap();
        for _ in 0..10 {
            let x = random::ginibre(&mut rng, 2);
            let rho = crate::states::random_density_with(&mut rng, 2);
            let lhs = x.trace_product(&ch.apply(rho.matrix()).unwrap());
            let rhs = ch.adjoint_apply(&x).unwrap().trace_product(rho.matrix());
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn pauli_family_reductions() {
        assert!(close(
            &pauli_channel(1.0, 0.0, 0.0, 0.0)
                .unwrap()
                .apply(&sigma(1))
                .unwrap(),
            &sigma(1),
            1e-15
        ));
        let rho = random_density(2, 5);
        let a = pauli_channel(0.8, 0.2, 0.0, 0.0)
            .unwrap()
            .apply(rho.matrix())
            .unwrap();
        assert!(close(
            &a,
            &bit_flip(0.2).unwrap().apply(rho.matrix()).unwrap(),
            1e-15
        ));
        let b = pauli_channel(0.7, 0.0, 0.0, 0.3)
            .unwrap()
            .apply(rho.matrix())
            .unwrap();
        assert!(close(
            &b,
            &phase_flip(0.3).unwrap().apply(rho.matrix()).unwrap(),
            1e-15
        ));
        assert!(pauli_channel(0.5, 0.5, 0.1, -0.1).is_err());
        assert!(pauli_channel(0.5, 0.4, 0.0, 0.0).is_err());
    }

    #[test]
    fn depolarizing_range() {
        assert!(close(
            &depolarizing(0.0).unwrap().apply(&sigma(2)).unwrap(),
            &sigma(2),
            1e-15
        ));
        assert!(depolarizing(0.4).is_err());
        assert!(depolarizing(-0.01).is_err());
        for p in [0.0, 0.1, 1.0 / 3.0] {
            let id = ComplexMatrix::identity(2);
            assert!(close(
                &depolarizing(p).unwrap().adjoint_apply(&id).unwrap(),
                &id,
                1e-15
            ));
        }
    }

    #[test]
    fn amplitude_damping_examples() {
        let id = ComplexMatrix::identity(2);
        for q in [0.0, 0.3, 1.0] {
            assert!(close(
                &amplitude_damping_unital(q).unwrap().completeness(),
                &id,
                1e-12
            ));
        }
        let x = sigma(1);
        assert!(close(
            &amplitude_damping_unital(0.0).unwrap().apply(&x).unwrap(),
            &x,
            1e-15
        ));
        let full = amplitude_damping_unital(1.0).unwrap();
        assert_eq!(full.kraus_ops()[0], ComplexMatrix::diag_real(&[1.0, 0.0]));
        assert_eq!(full.kraus_ops()[1], ComplexMatrix::diag_real(&[0.0, 1.0]));

        let ad = amplitude_damping_nonunital(1.0).unwrap();
        let decayed = ad.apply(&ComplexMatrix::diag_real(&[0.0, 1.0])).unwrap();
        assert!(close(
            &decayed,
            &ComplexMatrix::diag_real(&[1.0, 0.0]),
            1e-15
        ));
        let half = amplitude_damping_nonunital(0.5)
            .unwrap()
            .apply(&id.scale_real(0.5))
            .unwrap();
        assert!(close(
            &half,
            &ComplexMatrix::diag_real(&[0.75, 0.25]),
            1e-15
        ));
        assert!(amplitude_damping_unital(1.5).is_err());
        assert!(amplitude_damping_nonunital(-0.5).is_err());
    }

    #[test]
    fn twirl_examples() {
        let rho = random_density(2, 17);
        let single = group_twirl(&[sigma(0)])
            .unwrap()
            .apply(rho.matrix())
            .unwrap();
        assert!(close(&single, rho.matrix(), 1e-15));
        let z2 = twirl_z2().apply(rho.matrix()).unwrap();
        let pf = pauli_channel(0.5, 0.0, 0.0, 0.5)
            .unwrap()
            .apply(rho.matrix())
            .unwrap();
        assert!(close(&z2, &pf, 1e-15));
        let full = twirl_pauli().apply(rho.matrix()).unwrap();
        assert!(close(
            &full,
            &depolarizing(0.25).unwrap().apply(rho.matrix()).unwrap(),
            1e-15
        ));
        let not_unitary = ComplexMatrix::diag_real(&[1.0, 0.5]);
        assert!(matches!(
            group_twirl(&[sigma(0), not_unitary]),
            Err(Error::NotUnitary { index: 1, .. })
        ));
    }

    #[test]
    fn twirl_is_idempotent() {
        let mut rng = random::rng(3);
        // Z_4 generated by diag(1, i) on a qubit, and the Pauli group.
        let s = ComplexMatrix::from_rows(&[vec![ONE, ZERO], vec![ZERO, I]]).unwrap();
        let group: Vec<_> = (0..4)
            .scan(ComplexMatrix::identity(2), |acc, _| {
                let cur = acc.clone();
                *acc = &*acc * &s;
                Some(cur)
            })
            .collect();
        for ch in [group_twirl(&group).unwrap(), twirl_pauli(), twirl_z2()] {
            for _ in 0..5 {
                let rho = crate::states::random_density_with(&mut rng, 2);
                let once = ch.apply(rho.matrix()).unwrap();
                let twice = ch.apply(&once).unwrap();
                assert!(close(&once, &twice, 1e-10));
            }
        }
    }

    #[test]
    fn remix_preserves_the_map() {
        let mut rng = random::rng(21);
        let ch = amplitude_damping_nonunital(0.4).unwrap();
        let swap = Isometry::new(2, 2, vec![ZERO, ONE, ONE, ZERO]).unwrap();
        let swapped = ch.remix(&swap).unwrap();
        assert_eq!(swapped.kraus_ops()[0], ch.kraus_ops()[1]);
        assert_eq!(swapped.kraus_ops()[1], ch.kraus_ops()[0]);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let hadamard =
            Isometry::new(2, 2, vec![c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]).unwrap();
        let padded = Isometry::new(3, 2, vec![ONE, ZERO, ZERO, ONE, ZERO, ZERO]).unwrap();
        for w in [hadamard, padded, Isometry::random(&mut rng, 5, 2)] {
            let re = ch.remix(&w).unwrap();
            for _ in 0..20 {
                let rho = crate::states::random_density_with(&mut rng, 2);
                let x = random::ginibre(&mut rng, 2);
                assert!(close(
                    &re.apply(rho.matrix()).unwrap(),
                    &ch.apply(rho.matrix()).unwrap(),
                    1e-12
                ));
                assert!(close(
                    &re.adjoint_apply(&x).unwrap(),
                    &ch.adjoint_apply(&x).unwrap(),
                    1e-12
                ));
            }
        }
        let not_iso = Isometry::new(2, 2, vec![ONE, ONE, ZERO, ONE]);
        assert!(matches!(not_iso, Err(Error::NotIsometry { .. })));
        let wrong = Isometry::random(&mut rng, 3, 3);
        assert!(matches!(
            ch.remix(&wrong),
            Err(Error::RemixShape {
                expected: 2,
                found: 3
            })
        ));
    }

    #[test]
    fn validate_examples() {
        let f = pauli_channel(0.1, 0.2, 0.3, 0.4).unwrap().validate();
        assert_eq!(
            f,
            ChannelFlags {
                trace_preserving: true,
                unital: true,
                trace_nonincreasing: true
            }
        );
        let f = amplitude_damping_nonunital(0.3).unwrap().validate();
        assert_eq!(
            f,
            ChannelFlags {
                trace_preserving: true,
                unital: false,
                trace_nonincreasing: true
            }
        );
        let lossy =
            KrausChannel::new(vec![ComplexMatrix::identity(2).scale_real(0.5)], "half").unwrap();
        assert_eq!(
            lossy.validate(),
            ChannelFlags {
                trace_preserving: false,
                unital: false,
                trace_nonincreasing: true
            }
        );
        let gain = KrausChannel::new(vec![ComplexMatrix::identity(2).scale_real(1.1)], "gain");
        assert!(matches!(gain, Err(Error::TraceIncreasing(_))));
    }

    #[test]
    fn tensor_with_identity_examples() {
        let ch = amplitude_damping_nonunital(0.45).unwrap();
        let same = ch.tensor_with_identity(1);
        assert_eq!(same.kraus_ops(), ch.kraus_ops());
        let id = KrausChannel::identity(2).tensor_with_identity(2);
        assert_eq!(id.kraus_ops(), &[ComplexMatrix::identity(4)]);

        let a = random_density(2, 1);
        let b = random_density(3, 2);
        let lhs = ch
            .tensor_with_identity(3)
            .apply(a.tensor(&b).matrix())
            .unwrap();
        let rhs = ch.apply(a.matrix()).unwrap().kron(b.matrix());
        assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn constructed_channels_are_cp_and_trace_nonincreasing() {
        let chans = vec![
            KrausChannel::identity(2),
            pauli_channel(0.4, 0.3, 0.2, 0.1).unwrap(),
            depolarizing(0.3).unwrap(),
            bit_flip(0.7).unwrap(),
            phase_flip(0.2).unwrap(),
            amplitude_damping_unital(0.6).unwrap(),
            amplitude_damping_nonunital(0.6).unwrap(),
            twirl_z2(),
            twirl_pauli(),
            amplitude_damping_nonunital(0.2)
                .unwrap()
                .tensor_with_identity(2),
        ];
        for ch in chans {
            assert!(ch.validate().trace_nonincreasing, "{}", ch.label());
            let choi = hermitian_eig(&ch.choi()).unwrap();
            assert!(
                choi.min_eigenvalue() >= -1e-10,
                "{}: {}",
                ch.label(),
                choi.min_eigenvalue()
            );
        }
    }

    #[test]
    fn random_channels_are_valid() {
        let mut rng = random::rng(17);
        for dim in [2, 3] {
            let flags = random_channel(&mut rng, dim, 3).validate();
            assert!(flags.trace_preserving);
            let flags = random_unital_channel(&mut rng, dim, 3).validate();
            assert!(flags.trace_preserving && flags.unital);
        }
    }
}
