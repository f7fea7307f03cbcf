//! Analytic qubit values of `I` and `V` for the standard channel families.
//!
//! Notation: `λ₁,₂ = (1 ∓ |r|)/2`, `A_t = λ₁^t - λ₂^t`, `S_t = λ₁^t + λ₂^t`,
//! `γ = 1 - α - β`. Every formula carries a factor `A_α A_β` or
//! `(A_α + A_β)²`, so the `r_j²/|r|²` ratios have a removable singularity at
//! the origin; all functions return exactly 0 for `|r| < 1e-12`.

use crate::channels::check_range;
use crate::eigen::pow_psd;
use crate::error::{Error, Result};
use crate::skew::SkewParams;
use crate::states::BlochVector;

/// Below this Bloch norm every closed form is reported as 0.
pub const ORIGIN_RADIUS: f64 = 1e-12;
const PROB_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
struct Spectrum {
    l1: f64,
    l2: f64,
}

impl Spectrum {
    fn of(r: &BlochVector) -> Self {
        let (l1, l2) = r.eigenvalues();
        Self { l1, l2 }
    }

    fn a(&self, t: f64) -> f64 {
        pow_psd(self.l1, t) - pow_psd(self.l2, t)
    }

    fn s(&self, t: f64) -> f64 {
        pow_psd(self.l1, t) + pow_psd(self.l2, t)
    }

    /// `A_α A_β` for the I family.
    fn i_factor(&self, p: SkewParams) -> f64 {
        self.a(p.alpha()) * self.a(p.beta())
    }

    /// `(A_α + A_β)² / 4` for the V family.
    fn v_factor(&self, p: SkewParams) -> f64 {
        let sum = self.a(p.alpha()) + self.a(p.beta());
        sum * sum / 4.0
    }
}

#[derive(Debug, Clone, Copy)]
enum Family {
    I,
    V,
}

impl Family {
    fn factor(self, spec: &Spectrum, p: SkewParams) -> f64 {
        match self {
            Family::I => spec.i_factor(p),
            Family::V => spec.v_factor(p),
        }
    }
}

/// `¼ · w · F · S_γ` where `w` is the channel's geometric weight.
fn unital_form(r: &BlochVector, p: SkewParams, family: Family, weight: impl Fn(f64) -> f64) -> f64 {
    let norm_sq = r.norm_sq();
    if norm_sq.sqrt() < ORIGIN_RADIUS {
        return 0.0;
    }
    let spec = Spectrum::of(r);
    0.25 * weight(norm_sq) * family.factor(&spec, p) * spec.s(p.rest())
}

fn pauli_weights(probs: (f64, f64, f64)) -> Result<[f64; 3]> {
    let ps = [probs.0, probs.1, probs.2];
    if ps.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::InvalidProbabilities(format!(
            "negative entry in {ps:?}"
        )));
    }
    let total: f64 = ps.iter().sum();
    if total > 1.0 + PROB_TOL {
        return Err(Error::InvalidProbabilities(format!(
            "{ps:?} sums to {total} > 1"
        )));
    }
    Ok(ps)
}

fn pauli(r: &BlochVector, probs: (f64, f64, f64), p: SkewParams, family: Family) -> Result<f64> {
    let ps = pauli_weights(probs)?;
    let rs = r.components();
    Ok(unital_form(r, p, family, |n2| {
        ps.iter()
            .zip(rs)
            .map(|(pj, rj)| pj * (n2 - rj * rj) / n2)
            .sum()
    }))
}

fn depol(r: &BlochVector, prob: f64, p: SkewParams, family: Family) -> Result<f64> {
    check_range("p", prob, 1.0 / 3.0 + PROB_TOL, "[0, 1/3]")?;
    Ok(unital_form(r, p, family, |_| 2.0 * prob))
}

fn bit(r: &BlochVector, prob: f64, p: SkewParams, family: Family) -> Result<f64> {
    check_range("p", prob, 1.0, "[0, 1]")?;
    Ok(unital_form(r, p, family, |n2| {
        prob * (r.r2().powi(2) + r.r3().powi(2)) / n2
    }))
}

fn phase(r: &BlochVector, prob: f64, p: SkewParams, family: Family) -> Result<f64> {
    check_range("p", prob, 1.0, "[0, 1]")?;
    Ok(unital_form(r, p, family, |n2| {
        prob * (r.r1().powi(2) + r.r2().powi(2)) / n2
    }))
}

fn transverse_damping(q: f64, r: &BlochVector) -> f64 {
    (1.0 - (1.0 - q).sqrt()) * (r.r1().powi(2) + r.r2().powi(2))
}

fn ad_unital(r: &BlochVector, q: f64, p: SkewParams, family: Family) -> Result<f64> {
    check_range("q", q, 1.0, "[0, 1]")?;
    Ok(unital_form(r, p, family, |n2| {
        transverse_damping(q, r) / (2.0 * n2)
    }))
}

fn ad_nonunital(r: &BlochVector, q: f64, p: SkewParams, family: Family) -> Result<f64> {
    check_range("q", q, 1.0, "[0, 1]")?;
    let norm = r.norm();
    if norm < ORIGIN_RADIUS {
        return Ok(0.0);
    }
    let spec = Spectrum::of(r);
    let g = p.rest();
    let even = (transverse_damping(q, r) + q * r.r3().powi(2)) / (2.0 * norm * norm) * spec.s(g);
    let odd = q * r.r3() / (2.0 * norm) * spec.a(g);
    Ok(0.25 * (even + odd) * family.factor(&spec, p))
}

/// `I` under the Pauli channel with flip probabilities `(p₁, p₂, p₃)`.
pub fn i_pauli(r: &BlochVector, probs: (f64, f64, f64), p: SkewParams) -> Result<f64> {
    pauli(r, probs, p, Family::I)
}

/// `I` under [`crate::channels::depolarizing`]; increasing in `prob`.
pub fn i_depolarizing(r: &BlochVector, prob: f64, p: SkewParams) -> Result<f64> {
    depol(r, prob, p, Family::I)
}

pub fn i_bit_flip(r: &BlochVector, prob: f64, p: SkewParams) -> Result<f64> {
    bit(r, prob, p, Family::I)
}

pub fn i_phase_flip(r: &BlochVector, prob: f64, p: SkewParams) -> Result<f64> {
    phase(r, prob, p, Family::I)
}

pub fn i_ad_unital(r: &BlochVector, q: f64, p: SkewParams) -> Result<f64> {
    ad_unital(r, q, p, Family::I)
}

pub fn i_ad_nonunital(r: &BlochVector, q: f64, p: SkewParams) -> Result<f64> {
    ad_nonunital(r, q, p, Family::I)
}

/// `V` under the Pauli channel with flip probabilities `(p₁, p₂, p₃)`.
pub fn v_pauli(r: &BlochVector, probs: (f64, f64, f64), p: SkewParams) -> Result<f64> {
    pauli(r, probs, p, Family::V)
}

pub fn v_depolarizing(r: &BlochVector, prob: f64, p: SkewParams) -> Result<f64> {
    depol(r, prob, p, Family::V)
}

pub fn v_bit_flip(r: &BlochVector, prob: f64, p: SkewParams) -> Result<f64> {
    bit(r, prob, p, Family::V)
}

pub fn v_phase_flip(r: &BlochVector, prob: f64, p: SkewParams) -> Result<f64> {
    phase(r, prob, p, Family::V)
}

pub fn v_ad_unital(r: &BlochVector, q: f64, p: SkewParams) -> Result<f64> {
    ad_unital(r, q, p, Family::V)
}

pub fn v_ad_nonunital(r: &BlochVector, q: f64, p: SkewParams) -> Result<f64> {
    ad_nonunital(r, q, p, Family::V)
}

/// The six channel families with a closed form, for table-driven checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QubitFamily {
    Pauli(f64, f64, f64),
    Depolarizing(f64),
    BitFlip(f64),
    PhaseFlip(f64),
    AdUnital(f64),
    AdNonunital(f64),
}

impl QubitFamily {
    pub fn name(&self) -> &'static str {
        match self {
            QubitFamily::Pauli(..) => "pauli",
            QubitFamily::Depolarizing(_) => "depolarizing",
            QubitFamily::BitFlip(_) => "bit_flip",
            QubitFamily::PhaseFlip(_) => "phase_flip",
            QubitFamily::AdUnital(_) => "ad_unital",
            QubitFamily::AdNonunital(_) => "ad_nonunital",
        }
    }

    pub fn channel(&self) -> Result<crate::channels::KrausChannel> {
        use crate::channels::*;
        match *self {
            QubitFamily::Pauli(p1, p2, p3) => {
                pauli_channel((1.0 - p1 - p2 - p3).max(0.0), p1, p2, p3)
            }
            QubitFamily::Depolarizing(p) => depolarizing(p),
            QubitFamily::BitFlip(p) => bit_flip(p),
            QubitFamily::PhaseFlip(p) => phase_flip(p),
            QubitFamily::AdUnital(q) => amplitude_damping_unital(q),
            QubitFamily::AdNonunital(q) => amplitude_damping_nonunital(q),
        }
    }

    pub fn closed_i(&self, r: &BlochVector, p: SkewParams) -> Result<f64> {
        self.eval(r, p, Family::I)
    }

    pub fn closed_v(&self, r: &BlochVector, p: SkewParams) -> Result<f64> {
        self.eval(r, p, Family::V)
    }

    fn eval(&self, r: &BlochVector, p: SkewParams, family: Family) -> Result<f64> {
        match *self {
            QubitFamily::Pauli(p1, p2, p3) => pauli(r, (p1, p2, p3), p, family),
            QubitFamily::Depolarizing(x) => depol(r, x, p, family),
            QubitFamily::BitFlip(x) => bit(r, x, p, family),
            QubitFamily::PhaseFlip(x) => phase(r, x, p, family),
            QubitFamily::AdUnital(x) => ad_unital(r, x, p, family),
            QubitFamily::AdNonunital(x) => ad_nonunital(r, x, p, family),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::skew::{mgwyd_channel, mwgwyd_channel};
    use crate::states::{random_bloch_with, DensityMatrix};
    use rand::Rng;

    fn bloch(x: f64, y: f64, z: f64) -> BlochVector {
        BlochVector::new(x, y, z).unwrap()
    }

    fn params(a: f64, b: f64) -> SkewParams {
        SkewParams::new(a, b).unwrap()
    }

    #[test]
    fn spec_examples() {
        let quarter = params(0.25, 0.25);
        assert_eq!(
            i_pauli(&BlochVector::ORIGIN, (0.2, 0.3, 0.1), quarter).unwrap(),
            0.0
        );
        assert!(
            (i_pauli(&bloch(1.0, 0.0, 0.0), (0.0, 0.0, 1.0), quarter).unwrap() - 0.25).abs()
                < 1e-15
        );
        assert_eq!(
            i_depolarizing(&bloch(0.3, 0.2, 0.1), 0.0, quarter).unwrap(),
            0.0
        );
        assert_eq!(
            i_bit_flip(&bloch(1.0, 0.0, 0.0), 0.7, quarter).unwrap(),
            0.0
        );
        assert!((i_bit_flip(&bloch(0.0, 0.0, 1.0), 1.0, quarter).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(
            i_phase_flip(&bloch(0.0, 0.0, 0.6), 0.7, quarter).unwrap(),
            0.0
        );
        assert!((i_phase_flip(&bloch(1.0, 0.0, 0.0), 1.0, quarter).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(
            i_ad_unital(&bloch(0.3, 0.1, 0.2), 0.0, quarter).unwrap(),
            0.0
        );
        assert_eq!(
            i_ad_unital(&bloch(0.0, 0.0, 0.8), 0.6, quarter).unwrap(),
            0.0
        );
        assert_eq!(
            i_ad_nonunital(&bloch(0.3, 0.1, 0.2), 0.0, quarter).unwrap(),
            0.0
        );
        assert_eq!(
            i_ad_nonunital(&BlochVector::ORIGIN, 0.4, quarter).unwrap(),
            0.0
        );
    }

    #[test]
    fn rejects_bad_parameters() {
        let r = bloch(0.1, 0.2, 0.3);
        let p = params(0.2, 0.2);
        assert!(i_pauli(&r, (0.5, 0.4, 0.3), p).is_err());
        assert!(i_pauli(&r, (-0.1, 0.4, 0.3), p).is_err());
        assert!(i_depolarizing(&r, 0.4, p).is_err());
        assert!(v_bit_flip(&r, 1.2, p).is_err());
        assert!(v_ad_nonunital(&r, -0.1, p).is_err());
    }

    #[test]
    fn matches_kernel() {
        let mut rng = random::rng(2024);
        for _ in 0..200 {
            let norm = rng.random_range(0.05..0.999);
            let r = random_bloch_with(&mut rng, norm);
            let a = rng.random_range(0.0..1.0);
            let p = params(a, rng.random_range(0.0..1.0 - a));
            let s = rng.random_range(0.0..1.0);
            let families = [
                QubitFamily::Pauli(s / 3.0, s / 4.0, s / 5.0),
                QubitFamily::Depolarizing(s / 3.0),
                QubitFamily::BitFlip(s),
                QubitFamily::PhaseFlip(s),
                QubitFamily::AdUnital(s),
                QubitFamily::AdNonunital(s),
            ];
            let rho = DensityMatrix::from_bloch(&r);
            for fam in families {
                let ch = fam.channel().unwrap();
                let i = mgwyd_channel(&rho, &ch, p).unwrap();
                let v = mwgwyd_channel(&rho, &ch, p).unwrap();
                assert!(
                    (fam.closed_i(&r, p).unwrap() - i).abs() < 1e-10,
                    "{} I",
                    fam.name()
                );
                assert!(
                    (fam.closed_v(&r, p).unwrap() - v).abs() < 1e-10,
                    "{} V",
                    fam.name()
                );
            }
        }
    }

    #[test]
    fn boundary_cases_match_kernel() {
        let pure = bloch(0.6, 0.0, -0.8);
        for p in [
            params(0.3, 0.7),
            params(0.0, 1.0),
            params(0.2, 0.3),
            params(0.0, 0.0),
        ] {
            let rho = DensityMatrix::from_bloch(&pure);
            let fam = QubitFamily::AdNonunital(0.45);
            let ch = fam.channel().unwrap();
            assert!(
                (fam.closed_i(&pure, p).unwrap() - mgwyd_channel(&rho, &ch, p).unwrap()).abs()
                    < 1e-10
            );
            assert!(
                (fam.closed_v(&pure, p).unwrap() - mwgwyd_channel(&rho, &ch, p).unwrap()).abs()
                    < 1e-10
            );
        }
    }

    #[test]
    fn v_equals_i_on_diagonal_params() {
        let r = bloch(0.2, -0.5, 0.4);
        for a in [0.0, 0.1, 0.25, 0.5] {
            let p = params(a, a);
            assert!(
                (v_ad_nonunital(&r, 0.3, p).unwrap() - i_ad_nonunital(&r, 0.3, p).unwrap()).abs()
                    < 1e-15
            );
            assert!(
                (v_pauli(&r, (0.1, 0.2, 0.3), p).unwrap()
                    - i_pauli(&r, (0.1, 0.2, 0.3), p).unwrap())
                .abs()
                    < 1e-15
            );
        }
    }

    #[test]
    fn depolarizing_increasing() {
        let r = bloch(0.3, 0.4, -0.2);
        let p = params(0.1, 0.6);
        let grid: Vec<f64> = (0..=10).map(|k| k as f64 / 30.0).collect();
        for f in [i_depolarizing, v_depolarizing] {
            let vals: Vec<f64> = grid.iter().map(|&x| f(&r, x, p).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[1] >= w[0]));
        }
    }
}
