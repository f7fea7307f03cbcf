//! Modified generalized skew informations of a state with respect to an
//! operator or a channel.
//!
//! With half brackets `[X, K] = (XK - KX)/2` and `{X, K} = (XK + KX)/2`,
//! and `γ = 1 - α - β`:
//!
//! ```text
//! I(ρ, K) = Tr([ρ^α, K]† [ρ^β, K] ρ^γ)      J(ρ, K) = Tr({ρ^α, K}† {ρ^β, K} ρ^γ)
//! V(ρ, K) = Tr([M, K]† [M, K] ρ^γ)          W(ρ, K) = Tr({M, K}† {M, K} ρ^γ)
//! ```
//!
//! where `M = (ρ^α + ρ^β)/2`. Channel versions sum over the Kraus list and do
//! not depend on which Kraus representation is used.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::states::DensityMatrix;

/// Imaginary parts above this are treated as formula bugs, not rounding.
pub const IMAG_TOL: f64 = 1e-10;
/// Values in `[-NEG_TOL, 0)` are reported as 0; lower values are errors.
pub const NEG_TOL: f64 = 1e-10;
const PARAM_TOL: f64 = 1e-12;

/// Exponent pair `(α, β)` with `α, β ≥ 0` and `α + β ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct SkewParams {
    alpha: f64,
    beta: f64,
}

#[derive(Deserialize)]
struct RawParams {
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawParams> for SkewParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Self::new(raw.alpha, raw.beta)
    }
}

impl SkewParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let invalid = |reason| {
            Err(Error::InvalidParams {
                alpha,
                beta,
                reason,
            })
        };
        if !alpha.is_finite() || !beta.is_finite() {
            return invalid("exponents must be finite");
        }
        if alpha < 0.0 || beta < 0.0 {
            return invalid("exponents must be nonnegative");
        }
        if alpha + beta > 1.0 + PARAM_TOL {
            return invalid("alpha + beta must not exceed 1");
        }
        Ok(Self { alpha, beta })
    }

    /// `(α, 1 - α)`, the Wigner-Yanase-Dyson line.
    pub fn dyson(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0 - alpha)
    }

    pub const WIGNER_YANASE: SkewParams = SkewParams {
        alpha: 0.5,
        beta: 0.5,
    };

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `1 - α - β`, clamped at zero inside the tolerance band.
    pub fn rest(&self) -> f64 {
        (1.0 - self.alpha - self.beta).max(0.0)
    }

    pub fn swapped(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
        }
    }

    /// Satisfies the extra convexity constraints `α + 2β ≤ 1`, `2α + β ≤ 1`.
    pub fn in_convexity_region(&self) -> bool {
        self.alpha + 2.0 * self.beta <= 1.0 + PARAM_TOL
            && 2.0 * self.alpha + self.beta <= 1.0 + PARAM_TOL
    }
}

fn real_part(z: Complex64, quantity: &'static str) -> Result<f64> {
    if z.im.abs() > IMAG_TOL {
        return Err(Error::ComplexResidue {
            quantity,
            imag: z.im,
        });
    }
    Ok(z.re)
}

fn nonnegative(x: f64, quantity: &'static str) -> Result<f64> {
    if x < -NEG_TOL {
        return Err(Error::NegativeMeasure { quantity, value: x });
    }
    Ok(x.max(0.0))
}

/// The powers of `ρ` every measure needs, computed once per (state, params).
struct Powers {
    alpha: ComplexMatrix,
    beta: ComplexMatrix,
    rest: ComplexMatrix,
    mean: ComplexMatrix,
}

impl Powers {
    fn new(rho: &DensityMatrix, p: SkewParams) -> Result<Self> {
        let alpha = rho.power(p.alpha)?;
        let beta = rho.power(p.beta)?;
        let rest = rho.power(p.rest())?;
        let mean = (&alpha + &beta).scale_real(0.5);
        Ok(Self {
            alpha,
            beta,
            rest,
            mean,
        })
    }

    /// `Tr(B(x, K)† B(y, K) ρ^γ)` for the half (anti)commutator `B`.
    fn bracket_trace(
        &self,
        x: &ComplexMatrix,
        y: &ComplexMatrix,
        k: &ComplexMatrix,
        anti: bool,
    ) -> Complex64 {
        let (left, right) = if anti {
            (x.half_anticommutator(k), y.half_anticommutator(k))
        } else {
            (x.half_commutator(k), y.half_commutator(k))
        };
        let (left, right) = (left.expect("checked dims"), right.expect("checked dims"));
        left.dagger().trace_product(&(&right * &self.rest))
    }

    fn i(&self, k: &ComplexMatrix) -> Complex64 {
        self.bracket_trace(&self.alpha, &self.beta, k, false)
    }

    fn j(&self, k: &ComplexMatrix) -> Complex64 {
        self.bracket_trace(&self.alpha, &self.beta, k, true)
    }

    fn v(&self, k: &ComplexMatrix) -> Complex64 {
        self.bracket_trace(&self.mean, &self.mean, k, false)
    }

    fn w(&self, k: &ComplexMatrix) -> Complex64 {
        self.bracket_trace(&self.mean, &self.mean, k, true)
    }
}

fn check_op(rho: &DensityMatrix, k: &ComplexMatrix) -> Result<()> {
    if rho.dim() != k.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: k.dim(),
        });
    }
    Ok(())
}

fn check_channel(rho: &DensityMatrix, ch: &KrausChannel) -> Result<()> {
    if rho.dim() != ch.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: ch.dim(),
        });
    }
    Ok(())
}

type Term = fn(&Powers, &ComplexMatrix) -> Complex64;

fn op_value(
    rho: &DensityMatrix,
    k: &ComplexMatrix,
    p: SkewParams,
    term: Term,
    name: &'static str,
) -> Result<f64> {
    check_op(rho, k)?;
    let powers = Powers::new(rho, p)?;
    nonnegative(real_part(term(&powers, k), name)?, name)
}

fn channel_value(
    rho: &DensityMatrix,
    ch: &KrausChannel,
    p: SkewParams,
    term: Term,
    name: &'static str,
) -> Result<f64> {
    check_channel(rho, ch)?;
    let powers = Powers::new(rho, p)?;
    let total: Complex64 = ch.kraus_ops().iter().map(|k| term(&powers, k)).sum();
    nonnegative(real_part(total, name)?, name)
}

/// MGWYD skew information `I^{α,β}(ρ, K)`.
pub fn mgwyd_op(rho: &DensityMatrix, k: &ComplexMatrix, p: SkewParams) -> Result<f64> {
    op_value(rho, k, p, Powers::i, "I")
}

/// Anticommutator counterpart `J^{α,β}(ρ, K)`.
pub fn j_op(rho: &DensityMatrix, k: &ComplexMatrix, p: SkewParams) -> Result<f64> {
    op_value(rho, k, p, Powers::j, "J")
}

/// MWGWYD skew information `V^{α,β}(ρ, K)`.
pub fn mwgwyd_op(rho: &DensityMatrix, k: &ComplexMatrix, p: SkewParams) -> Result<f64> {
    op_value(rho, k, p, Powers::v, "V")
}

pub fn w_op(rho: &DensityMatrix, k: &ComplexMatrix, p: SkewParams) -> Result<f64> {
    op_value(rho, k, p, Powers::w, "W")
}

/// `I^{α,β}(ρ, Φ) = Σ_i I^{α,β}(ρ, K_i)`.
pub fn mgwyd_channel(rho: &DensityMatrix, ch: &KrausChannel, p: SkewParams) -> Result<f64> {
    channel_value(rho, ch, p, Powers::i, "I")
}

pub fn j_channel(rho: &DensityMatrix, ch: &KrausChannel, p: SkewParams) -> Result<f64> {
    channel_value(rho, ch, p, Powers::j, "J")
}

pub fn mwgwyd_channel(rho: &DensityMatrix, ch: &KrausChannel, p: SkewParams) -> Result<f64> {
    channel_value(rho, ch, p, Powers::v, "V")
}

pub fn w_channel(rho: &DensityMatrix, ch: &KrausChannel, p: SkewParams) -> Result<f64> {
    channel_value(rho, ch, p, Powers::w, "W")
}

/// `C = ½[Tr(ρ^{1-α} K† ρ^α K) + Tr(ρ^{1-β} K† ρ^β K)]`, equal to `J - I`.
pub fn c_term(rho: &DensityMatrix, k: &ComplexMatrix, p: SkewParams) -> Result<f64> {
    check_op(rho, k)?;
    let kd = k.dagger();
    let side = |t: f64| -> Result<Complex64> {
        let outer = rho.power(1.0 - t)?;
        let inner = rho.power(t)?;
        Ok((&outer * &kd).trace_product(&(&inner * k)))
    };
    let total = (side(p.alpha)? + side(p.beta)?) * 0.5;
    nonnegative(real_part(total, "C")?, "C")
}

/// `D = Tr(N K† M K)` with `M = (ρ^α + ρ^β)/2`, `N = (ρ^{1-α} + ρ^{1-β})/2`;
/// equal to `W - V`.
pub fn d_term(rho: &DensityMatrix, k: &ComplexMatrix, p: SkewParams) -> Result<f64> {
    check_op(rho, k)?;
    let powers = Powers::new(rho, p)?;
    let n = complementary_mean(rho, p)?;
    let total = (&n * &k.dagger()).trace_product(&(&powers.mean * k));
    nonnegative(real_part(total, "D")?, "D")
}

fn complementary_mean(rho: &DensityMatrix, p: SkewParams) -> Result<ComplexMatrix> {
    Ok((&rho.power(1.0 - p.alpha)? + &rho.power(1.0 - p.beta)?).scale_real(0.5))
}

/// `½ Tr(ρ^γ Φ†(ρ^{α+β}) + Φ(ρ))`, which equals `I + J` for any channel.
pub fn conservation_rhs_ij(rho: &DensityMatrix, ch: &KrausChannel, p: SkewParams) -> Result<f64> {
    check_channel(rho, ch)?;
    let rest = rho.power(p.rest())?;
    let sum = rho.power((p.alpha + p.beta).min(1.0))?;
    let total = rest.trace_product(&ch.adjoint_apply(&sum)?) + ch.apply(rho.matrix())?.trace();
    real_part(total * 0.5, "I+J")
}

/// `½ Tr(ρ^γ Φ†(M²) + Φ(N M))`, which equals `V + W` for any channel.
pub fn conservation_rhs_vw(rho: &DensityMatrix, ch: &KrausChannel, p: SkewParams) -> Result<f64> {
    check_channel(rho, ch)?;
    let powers = Powers::new(rho, p)?;
    let n = complementary_mean(rho, p)?;
    let m2 = &powers.mean * &powers.mean;
    let total = powers.rest.trace_product(&ch.adjoint_apply(&m2)?)
        + ch.apply(&(&n * &powers.mean))?.trace();
    real_part(total * 0.5, "V+W")
}

/// `I^{α,β}(ρ, Φ)` through the dual channel:
/// `¼ Tr[ρ^γ Φ†(ρ^{α+β}) + Φ(ρ) - ρ^{1-α} Φ†(ρ^α) - ρ^{1-β} Φ†(ρ^β)]`.
///
/// Shares no bracket code with [`mgwyd_channel`]; the result is not clamped.
pub fn trace_form_i(rho: &DensityMatrix, ch: &KrausChannel, p: SkewParams) -> Result<f64> {
    check_channel(rho, ch)?;
    let dual_pair = |outer: f64, inner: f64| -> Result<Complex64> {
        Ok(rho
            .power(outer)?
            .trace_product(&ch.adjoint_apply(&rho.power(inner)?)?))
    };
    let total = dual_pair(p.rest(), (p.alpha + p.beta).min(1.0))? + ch.apply(rho.matrix())?.trace()
        - dual_pair(1.0 - p.alpha, p.alpha)?
        - dual_pair(1.0 - p.beta, p.beta)?;
    real_part(total * 0.25, "I (trace form)")
}

/// Fixed-point residuals `||Φ†(ρ^t) - ρ^t||` for `t = α, β, α + β`; all
/// vanish exactly when `I^{α,β}(ρ, Φ) = 0`.
pub fn fixed_point_residuals(
    rho: &DensityMatrix,
    ch: &KrausChannel,
    p: SkewParams,
) -> Result<[f64; 3]> {
    check_channel(rho, ch)?;
    let residual = |t: f64| -> Result<f64> {
        let x = rho.power(t)?;
        Ok(ch.adjoint_apply(&x)?.distance(&x))
    };
    Ok([
        residual(p.alpha)?,
        residual(p.beta)?,
        residual((p.alpha + p.beta).min(1.0))?,
    ])
}

/// Generalized Wigner-Yanase-Dyson skew information of a Hermitian observable
/// with ordinary commutators: `-½ Tr([ρ^α, A][ρ^β, A] ρ^γ)`.
pub fn gwyd_hermitian(rho: &DensityMatrix, a: &ComplexMatrix, p: SkewParams) -> Result<f64> {
    check_op(rho, a)?;
    let comm = |x: &ComplexMatrix| &(x * a) - &(a * x);
    let left = comm(&rho.power(p.alpha)?);
    let right = comm(&rho.power(p.beta)?);
    let value = left.trace_product(&(&right * &rho.power(p.rest())?)) * -0.5;
    real_part(value, "GWYD")
}

/// All four channel quantities plus both conservation identities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    #[serde(rename = "I")]
    pub i: f64,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "W")]
    pub w: f64,
    #[serde(rename = "sum_IJ")]
    pub sum_ij: f64,
    #[serde(rename = "rhs_IJ")]
    pub rhs_ij: f64,
    #[serde(rename = "sum_VW")]
    pub sum_vw: f64,
    #[serde(rename = "rhs_VW")]
    pub rhs_vw: f64,
    pub params: SkewParams,
    pub channel_label: String,
}

/// Evaluates every quantity for one (state, channel, params) triple.
pub fn measure(rho: &DensityMatrix, ch: &KrausChannel, p: SkewParams) -> Result<MeasureReport> {
    check_channel(rho, ch)?;
    let powers = Powers::new(rho, p)?;
    let sum = |term: Term, name: &'static str| -> Result<f64> {
        let total: Complex64 = ch.kraus_ops().iter().map(|k| term(&powers, k)).sum();
        nonnegative(real_part(total, name)?, name)
    };
    let (i, j) = (sum(Powers::i, "I")?, sum(Powers::j, "J")?);
    let (v, w) = (sum(Powers::v, "V")?, sum(Powers::w, "W")?);
    Ok(MeasureReport {
        i,
        j,
        v,
        w,
        sum_ij: i + j,
        rhs_ij: conservation_rhs_ij(rho, ch, p)?,
        sum_vw: v + w,
        rhs_vw: conservation_rhs_vw(rho, ch, p)?,
        params: p,
        channel_label: ch.label().to_string(),
    })
}
