//! Mach-Zehnder interferometer with a which-path detector.
//!
//! The external qubit (the path) passes beam splitter, detector coupling,
//! mirror and beam splitter:
//!
//! ```text
//! U = (U_B ⊗ 1)(U_M ⊗ 1) V_ab (U_B ⊗ 1),   V_ab = e^{iθ}|0><0| ⊗ 1 + |1><1| ⊗ V
//! ```
//!
//! and the detector, prepared in `τ`, is traced out. The phase shifter sits
//! inside `V_ab`, so no separate `U_θ` factor appears.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{KrausChannel, UNITARY_TOL};
use crate::eigen::pow_psd;
use crate::error::{Error, Result};
use crate::matrix::{c, ComplexMatrix, Subsystem, ZERO};
use crate::skew::SkewParams;
use crate::states::{BlochVector, DensityMatrix};

/// Detector eigenvalues below this weight contribute no Kraus operator.
pub const KRAUS_WEIGHT_CUTOFF: f64 = 1e-14;
const ORIGIN_RADIUS: f64 = 1e-12;

/// Points in the coarse θ scan of the extremum oracle.
pub const THETA_GRID: usize = 720;
const GOLDEN_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct MachZehnderConfig {
    pub bloch: BlochVector,
    pub tau: DensityMatrix,
    pub detector: ComplexMatrix,
    pub theta: f64,
}

impl MachZehnderConfig {
    pub fn new(
        bloch: BlochVector,
        tau: DensityMatrix,
        detector: ComplexMatrix,
        theta: f64,
    ) -> Result<Self> {
        if detector.dim() != tau.dim() {
            return Err(Error::DimensionMismatch {
                expected: tau.dim(),
                found: detector.dim(),
            });
        }
        let residual = detector.unitarity_residual();
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary { index: 0, residual });
        }
        if !theta.is_finite() {
            return Err(Error::ParameterOutOfRange {
                name: "theta",
                value: theta,
                range: "finite reals",
            });
        }
        Ok(Self {
            bloch,
            tau,
            detector,
            theta,
        })
    }

    pub fn with_theta(&self, theta: f64) -> Self {
        Self {
            theta,
            ..self.clone()
        }
    }

    pub fn detector_dim(&self) -> usize {
        self.tau.dim()
    }

    /// `Tr(V τ)`, the detector overlap.
    pub fn overlap(&self) -> Complex64 {
        self.detector.trace_product(self.tau.matrix())
    }

    /// `ν = arg Tr(V τ)`.
    pub fn nu(&self) -> f64 {
        self.overlap().arg()
    }

    /// Phase of the transverse Bloch components, `-2 atan2(r₂, r₃)`, taken
    /// as 0 when `r₂ = r₃ = 0`.
    pub fn gamma(&self) -> f64 {
        let (r2, r3) = (self.bloch.r2(), self.bloch.r3());
        if r2 == 0.0 && r3 == 0.0 {
            return 0.0;
        }
        (-2.0 * r2 * r3).atan2(r3 * r3 - r2 * r2)
    }

    /// The full `2 d_b x 2 d_b` unitary with basis index `i·d_b + m`.
    pub fn unitary(&self) -> ComplexMatrix {
        let db = self.detector_dim();
        let id = ComplexMatrix::identity(db);
        let s = FRAC_1_SQRT_2;
        let ub = ComplexMatrix::from_real(2, &[s, s, s, -s])
            .expect("2x2")
            .kron(&id);
        let um = ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0])
            .expect("2x2")
            .kron(&id);
        let p0 = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let p1 = ComplexMatrix::diag_real(&[0.0, 1.0]);
        let vab =
            &p0.kron(&id).scale(Complex64::from_polar(1.0, self.theta)) + &p1.kron(&self.detector);
        &(&(&ub * &um) * &vab) * &ub
    }
}

/// The interferometer as a qubit channel `ρ ↦ Tr_b(U (ρ ⊗ τ) U†)`.
///
/// Kraus operators `K_{mk} = √t_k (1 ⊗ <m|) U (1 ⊗ |φ_k>)` come from the
/// spectral decomposition `τ = Σ t_k |φ_k><φ_k|`.
pub fn build_mz_channel(cfg: &MachZehnderConfig) -> Result<KrausChannel> {
    let eig = cfg.tau.eigen();
    let vectors: Vec<_> = (0..eig.dim()).map(|k| eig.eigenvectors.column(k)).collect();
    kraus_from_decomposition(&cfg.unitary(), &eig.eigenvalues, &vectors)
}

fn kraus_from_decomposition(
    u: &ComplexMatrix,
    weights: &[f64],
    vectors: &[Vec<Complex64>],
) -> Result<KrausChannel> {
    let db = u.dim() / 2;
    let mut ops = Vec::new();
    for (&t, phi) in weights.iter().zip(vectors) {
        if t < KRAUS_WEIGHT_CUTOFF {
            continue;
        }
        let weight = t.sqrt();
        for m in 0..db {
            ops.push(ComplexMatrix::from_fn(2, |i, j| {
                let mut acc = ZERO;
                for (n, amp) in phi.iter().enumerate() {
                    acc += u[(i * db + m, j * db + n)] * amp;
                }
                acc * weight
            }));
        }
    }
    KrausChannel::new(ops, "mach_zehnder")
}

/// Applies the interferometer through the dilation directly, without Kraus
/// operators.
pub fn apply_dilation(cfg: &MachZehnderConfig, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.dim() != 2 {
        return Err(Error::NotQubit(rho.dim()));
    }
    let joint = rho.kron(cfg.tau.matrix());
    cfg.unitary()
        .conjugate(&joint)
        .partial_trace(2, cfg.detector_dim(), Subsystem::A)
}

/// Weight multiplying `|Tr(Vτ)|` in the oscillating term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MzWeight {
    /// `1 - r₁²`, exact for pure external states.
    #[default]
    Published,
    /// `|r|² - r₁² = r₂² + r₃²`, the transverse Bloch content; agrees with
    /// the channel for mixed external states too.
    Transverse,
}

/// `I^α(θ) = ¼[base - oscillation·cos(θ - phase)]` and
/// `J^α(θ) = ¼[4 - base + oscillation·cos(θ - phase)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MzCoefficients {
    pub base: f64,
    pub oscillation: f64,
    pub phase: f64,
}

impl MzCoefficients {
    pub fn new(cfg: &MachZehnderConfig, alpha: f64, weight: MzWeight) -> Result<Self> {
        let p = SkewParams::dyson(alpha)?;
        let (l1, l2) = cfg.bloch.eigenvalues();
        let s = |t: f64| pow_psd(l1, t) + pow_psd(l2, t);
        let a = |t: f64| pow_psd(l1, t) - pow_psd(l2, t);
        let norm_sq = cfg.bloch.norm_sq();
        let r1_sq = cfg.bloch.r1().powi(2);
        let ratio = if norm_sq.sqrt() < ORIGIN_RADIUS {
            0.0
        } else {
            a(p.beta()) * a(p.alpha()) / norm_sq
        };
        let w = match weight {
            MzWeight::Published => 1.0 - r1_sq,
            MzWeight::Transverse => norm_sq - r1_sq,
        };
        Ok(Self {
            base: 2.0 - s(p.beta()) * s(p.alpha()) + ratio * r1_sq,
            oscillation: ratio * w * cfg.overlap().norm(),
            phase: cfg.nu() + cfg.gamma(),
        })
    }

    pub fn i_at(&self, theta: f64) -> f64 {
        0.25 * (self.base - self.oscillation * (theta - self.phase).cos())
    }

    pub fn j_at(&self, theta: f64) -> f64 {
        0.25 * (4.0 - self.base + self.oscillation * (theta - self.phase).cos())
    }

    /// `min_θ I^α`; the oscillation coefficient is nonnegative.
    pub fn path_information(&self) -> f64 {
        0.25 * (self.base - self.oscillation)
    }

    /// `max_θ J^α`.
    pub fn visibility(&self) -> f64 {
        0.25 * (4.0 - self.base + self.oscillation)
    }
}

/// Closed-form `I^α(ρ, Φ)` for the interferometer channel at `cfg.theta`.
pub fn i_alpha_mz(cfg: &MachZehnderConfig, alpha: f64) -> Result<f64> {
    i_alpha_mz_weighted(cfg, alpha, MzWeight::Published)
}

/// Closed-form `J^α(ρ, Φ)`.
pub fn j_alpha_mz(cfg: &MachZehnderConfig, alpha: f64) -> Result<f64> {
    j_alpha_mz_weighted(cfg, alpha, MzWeight::Published)
}

pub fn i_alpha_mz_weighted(cfg: &MachZehnderConfig, alpha: f64, weight: MzWeight) -> Result<f64> {
    Ok(MzCoefficients::new(cfg, alpha, weight)?.i_at(cfg.theta))
}

pub fn j_alpha_mz_weighted(cfg: &MachZehnderConfig, alpha: f64, weight: MzWeight) -> Result<f64> {
    Ok(MzCoefficients::new(cfg, alpha, weight)?.j_at(cfg.theta))
}

/// Which-path information `P̃^α = min_θ I^α`. Ignores `cfg.theta`.
pub fn path_information(cfg: &MachZehnderConfig, alpha: f64) -> Result<f64> {
    Ok(MzCoefficients::new(cfg, alpha, MzWeight::Published)?.path_information())
}

/// Visibility `W̃^α = max_θ J^α`. Ignores `cfg.theta`.
pub fn visibility(cfg: &MachZehnderConfig, alpha: f64) -> Result<f64> {
    Ok(MzCoefficients::new(cfg, alpha, MzWeight::Published)?.visibility())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaExtremum {
    pub theta: f64,
    pub value: f64,
}

/// Minimizes a `2π`-periodic function: a [`THETA_GRID`]-point scan followed
/// by golden-section refinement around the best grid point.
pub fn minimize_over_theta<F>(f: F) -> ThetaExtremum
where
    F: Fn(f64) -> f64 + Sync,
{
    let step = TAU / THETA_GRID as f64;
    let values: Vec<f64> = (0..THETA_GRID)
        .into_par_iter()
        .map(|k| f(k as f64 * step))
        .collect();
    let best = (0..THETA_GRID)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("nonempty grid");
    let (mut lo, mut hi) = ((best as f64 - 1.0) * step, (best as f64 + 1.0) * step);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > GOLDEN_TOL {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    let theta = 0.5 * (lo + hi);
    let (theta, value) = [(theta, f(theta)), (best as f64 * step, values[best])]
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("two candidates");
    ThetaExtremum {
        theta: theta.rem_euclid(TAU),
        value,
    }
}

pub fn maximize_over_theta<F>(f: F) -> ThetaExtremum
where
    F: Fn(f64) -> f64 + Sync,
{
    let ext = minimize_over_theta(|t| -f(t));
    ThetaExtremum {
        theta: ext.theta,
        value: -ext.value,
    }
}

/// Signed distance between two angles, in `(-π, π]`.
pub fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// A detector unitary `diag(1, e^{iφ})` on a qubit, handy for examples.
pub fn phase_detector(phi: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => c(1.0, 0.0),
        (1, 1) => Complex64::from_polar(1.0, phi),
        _ => ZERO,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::skew::{j_channel, mgwyd_channel};
    use crate::states::{random_bloch_with, random_density_with};
    use rand::Rng;

    fn random_cfg<R: Rng>(rng: &mut R, norm: f64, db: usize) -> MachZehnderConfig {
        let bloch = random_bloch_with(rng, norm);
        let tau = random_density_with(rng, db);
        let v = random::haar_unitary(rng, db);
        MachZehnderConfig::new(bloch, tau, v, rng.random_range(0.0..TAU)).unwrap()
    }

    #[test]
    fn trivial_detector_is_a_unitary() {
        let cfg = MachZehnderConfig::new(
            BlochVector::new(0.3, -0.2, 0.5).unwrap(),
            DensityMatrix::maximally_mixed(2),
            ComplexMatrix::identity(2),
            0.0,
        )
        .unwrap();
        let ch = build_mz_channel(&cfg).unwrap();
        let s = FRAC_1_SQRT_2;
        let ub = ComplexMatrix::from_real(2, &[s, s, s, -s]).unwrap();
        let um = ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let w = &(&ub * &um) * &ub;
        let rho = cfg.bloch.matrix();
        assert!(ch.apply(&rho).unwrap().distance(&w.conjugate(&rho)) < 1e-12);
    }

    #[test]
    fn kraus_and_dilation_agree() {
        let mut rng = random::rng(77);
        for db in [2, 3] {
            for _ in 0..10 {
                let cfg = random_cfg(&mut rng, 0.8, db);
                let ch = build_mz_channel(&cfg).unwrap();
                assert!(ch.validate().trace_preserving);
                assert!(ch.validate().unital);
                let rho = random_density_with(&mut rng, 2);
                let via_kraus = ch.apply(rho.matrix()).unwrap();
                let via_dilation = apply_dilation(&cfg, rho.matrix()).unwrap();
                assert!(via_kraus.distance(&via_dilation) < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_detector_spectrum_is_basis_independent() {
        let mut rng = random::rng(3);
        let bloch = random_bloch_with(&mut rng, 0.9);
        let v = random::haar_unitary(&mut rng, 3);
        let frame = random::haar_unitary(&mut rng, 3);
        let weights = [0.4, 0.4, 0.2];
        let tau = frame
            .conjugate(&ComplexMatrix::diag_real(&weights))
            .hermitian_part();
        let cfg = MachZehnderConfig::new(bloch, DensityMatrix::new(tau).unwrap(), v, 1.1).unwrap();

        // Two eigenbases of the same τ differing by a rotation inside the
        // degenerate block.
        let mix = random::haar_unitary(&mut rng, 2);
        let first: Vec<_> = (0..3).map(|k| frame.column(k)).collect();
        let mut second = first.clone();
        for (k, col) in second.iter_mut().take(2).enumerate() {
            for (i, z) in col.iter_mut().enumerate() {
                *z = first[0][i] * mix[(0, k)] + first[1][i] * mix[(1, k)];
            }
        }
        let u = cfg.unitary();
        let a = kraus_from_decomposition(&u, &weights, &first).unwrap();
        let b = kraus_from_decomposition(&u, &weights, &second).unwrap();
        let built = build_mz_channel(&cfg).unwrap();
        for _ in 0..5 {
            let rho = random_density_with(&mut rng, 2);
            let xa = a.apply(rho.matrix()).unwrap();
            assert!(xa.distance(&b.apply(rho.matrix()).unwrap()) < 1e-12);
            assert!(xa.distance(&built.apply(rho.matrix()).unwrap()) < 1e-12);
        }
        assert!(a.kraus_ops()[0].distance(&b.kraus_ops()[0]) > 1e-3);
    }

    #[test]
    fn origin_examples() {
        let mut rng = random::rng(1);
        let mut cfg = random_cfg(&mut rng, 0.5, 2);
        cfg.bloch = BlochVector::ORIGIN;
        for alpha in [0.0, 0.3, 0.5, 1.0] {
            assert!(i_alpha_mz(&cfg, alpha).unwrap().abs() < 1e-15);
            assert!((j_alpha_mz(&cfg, alpha).unwrap() - 1.0).abs() < 1e-15);
            assert!(path_information(&cfg, alpha).unwrap().abs() < 1e-15);
            assert!((visibility(&cfg, alpha).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn pure_polar_state_with_perfect_overlap() {
        let cfg = MachZehnderConfig::new(
            BlochVector::new(0.0, 0.0, 1.0).unwrap(),
            DensityMatrix::diagonal(&[1.0, 0.0]).unwrap(),
            phase_detector(0.7),
            0.0,
        )
        .unwrap();
        assert!((cfg.overlap().norm() - 1.0).abs() < 1e-15);
        for alpha in [0.25, 0.5, 0.75] {
            assert!(path_information(&cfg, alpha).unwrap().abs() < 1e-15);
            assert!((visibility(&cfg, alpha).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn closed_form_matches_kernel_for_pure_states() {
        let mut rng = random::rng(11);
        for _ in 0..20 {
            let cfg = random_cfg(&mut rng, 1.0, 2);
            let ch = build_mz_channel(&cfg).unwrap();
            let rho = DensityMatrix::from_bloch(&cfg.bloch);
            for alpha in [0.0, 0.2, 0.5, 0.9] {
                let p = SkewParams::dyson(alpha).unwrap();
                let i = mgwyd_channel(&rho, &ch, p).unwrap();
                let j = j_channel(&rho, &ch, p).unwrap();
                assert!((i - i_alpha_mz(&cfg, alpha).unwrap()).abs() < 1e-8);
                assert!((j - j_alpha_mz(&cfg, alpha).unwrap()).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn transverse_weight_matches_kernel_for_mixed_states() {
        let mut rng = random::rng(12);
        let mut worst_published: f64 = 0.0;
        for _ in 0..20 {
            let cfg = random_cfg(&mut rng, 0.6, 3);
            let ch = build_mz_channel(&cfg).unwrap();
            let rho = DensityMatrix::from_bloch(&cfg.bloch);
            let p = SkewParams::dyson(0.3).unwrap();
            let i = mgwyd_channel(&rho, &ch, p).unwrap();
            let exact = i_alpha_mz_weighted(&cfg, 0.3, MzWeight::Transverse).unwrap();
            assert!((i - exact).abs() < 1e-10);
            worst_published = worst_published.max((i - i_alpha_mz(&cfg, 0.3).unwrap()).abs());
        }
        assert!(worst_published > 1e-4);
    }

    #[test]
    fn symmetric_in_alpha() {
        let mut rng = random::rng(21);
        let cfg = random_cfg(&mut rng, 0.7, 2);
        for alpha in [0.1, 0.25, 0.4] {
            let a = i_alpha_mz(&cfg, alpha).unwrap();
            let b = i_alpha_mz(&cfg, 1.0 - alpha).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
        assert!(i_alpha_mz(&cfg, 1.2).is_err());
    }

    #[test]
    fn theta_extremes_and_duality() {
        let mut rng = random::rng(5);
        for _ in 0..5 {
            let cfg = random_cfg(&mut rng, 0.95, 2);
            let alpha = 0.35;
            let coeffs = MzCoefficients::new(&cfg, alpha, MzWeight::Published).unwrap();
            let min = minimize_over_theta(|t| coeffs.i_at(t));
            let max = maximize_over_theta(|t| coeffs.j_at(t));
            assert!((min.value - path_information(&cfg, alpha).unwrap()).abs() < 1e-8);
            assert!((max.value - visibility(&cfg, alpha).unwrap()).abs() < 1e-8);
            assert!(angle_gap(min.theta, coeffs.phase).abs() < 1e-4);
            assert!(angle_gap(max.theta, coeffs.phase).abs() < 1e-4);
            let total = path_information(&cfg, alpha).unwrap() + visibility(&cfg, alpha).unwrap();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_invalid_configs() {
        let tau = DensityMatrix::maximally_mixed(2);
        let bad = ComplexMatrix::diag_real(&[1.0, 0.5]);
        assert!(matches!(
            MachZehnderConfig::new(BlochVector::ORIGIN, tau.clone(), bad, 0.0),
            Err(Error::NotUnitary { .. })
        ));
        assert!(
            MachZehnderConfig::new(BlochVector::ORIGIN, tau, ComplexMatrix::identity(3), 0.0)
                .is_err()
        );
    }
}
