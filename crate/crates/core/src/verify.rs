//! Seeded property suites over every module, summarized in one report.
//!
//! Each invariant records the largest residual seen over its cases and
//! passes when that residual is within tolerance. Inequalities are recorded
//! as the size of the violation, so a satisfied inequality has residual 0.
//! Observations are reported without gating the result.

use std::f64::consts::TAU;

use rand::Rng;
use serde::Serialize;

use crate::channels::{
    amplitude_damping_nonunital, amplitude_damping_unital, bit_flip, phase_flip, random_channel,
    random_unital_channel, twirl_pauli, twirl_z2, Isometry, KrausChannel,
};
use crate::closed_form::QubitFamily;
use crate::eigen::hermitian_eig;
use crate::error::{Error, Result};
use crate::interferometer::{
    angle_gap, apply_dilation, build_mz_channel, i_alpha_mz, i_alpha_mz_weighted, j_alpha_mz,
    maximize_over_theta, minimize_over_theta, path_information, visibility, MachZehnderConfig,
    MzCoefficients, MzWeight,
};
use crate::matrix::{c, ComplexMatrix};
use crate::random::{self, SeededRng};
use crate::skew::{
    c_term, d_term, fixed_point_residuals, gwyd_hermitian, j_channel, j_op, measure, mgwyd_channel,
    mgwyd_op, mwgwyd_channel, mwgwyd_op, trace_form_i, w_channel, w_op, SkewParams,
};
use crate::states::{random_bloch_with, random_density_with, BlochVector, DensityMatrix};

/// Deliberate kernel defects for checking that the suite notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Ordinary commutators in place of the half commutators.
    FullCommutator,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualBin {
    pub norm_from: f64,
    pub norm_to: f64,
    pub cases: usize,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Observation {
    pub suite: &'static str,
    pub name: &'static str,
    pub cases: usize,
    pub value: f64,
    pub detail: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub bins: Vec<ResidualBin>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub cases: usize,
    pub pass: bool,
    pub invariants: Vec<InvariantResult>,
    pub observations: Vec<Observation>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &InvariantResult> {
        self.invariants.iter().filter(|r| !r.pass)
    }

    pub fn invariant(&self, name: &str) -> Option<&InvariantResult> {
        self.invariants.iter().find(|r| r.name == name)
    }

    pub fn observation(&self, name: &str) -> Option<&Observation> {
        self.observations.iter().find(|o| o.name == name)
    }
}

struct Check {
    suite: &'static str,
    name: &'static str,
    tolerance: f64,
    cases: usize,
    max: f64,
}

impl Check {
    fn new(suite: &'static str, name: &'static str, tolerance: f64) -> Self {
        Self {
            suite,
            name,
            tolerance,
            cases: 0,
            max: 0.0,
        }
    }

    fn record(&mut self, residual: f64) {
        self.cases += 1;
        let r = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual.abs()
        };
        self.max = self.max.max(r);
    }

    /// An evaluation error counts as an infinite residual.
    fn record_result(&mut self, residual: Result<f64>) {
        self.record(residual.unwrap_or(f64::INFINITY));
    }

    fn finish(self) -> InvariantResult {
        InvariantResult {
            suite: self.suite,
            name: self.name,
            cases: self.cases,
            max_residual: self.max,
            tolerance: self.tolerance,
            pass: self.cases > 0 && self.max <= self.tolerance,
        }
    }
}

fn violation(excess: f64) -> f64 {
    excess.max(0.0)
}

struct Collector {
    invariants: Vec<InvariantResult>,
    observations: Vec<Observation>,
}

impl Collector {
    fn push(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.invariants
            .extend(checks.into_iter().map(Check::finish));
    }
}

/// `α` uniform, then `β` uniform on the remaining simplex edge.
pub fn random_params<R: Rng + ?Sized>(rng: &mut R) -> SkewParams {
    let a = rng.random_range(0.0..1.0);
    let b = rng.random_range(0.0..1.0) * (1.0 - a);
    SkewParams::new(a, b).expect("inside the simplex")
}

/// Parameters with `α + 2β ≤ 1` and `2α + β ≤ 1`.
pub fn random_convex_params<R: Rng + ?Sized>(rng: &mut R) -> SkewParams {
    let a = rng.random_range(0.0..0.5);
    let b_max = f64::min((1.0 - a) / 2.0, 1.0 - 2.0 * a);
    let b = rng.random_range(0.0..1.0) * b_max;
    SkewParams::new(a, b).expect("inside the convexity region")
}

/// Channel with diagonal Kraus operators `K_i = diag(u_0[i], ..., u_{d-1}[i])`
/// built from unit vectors `u_j`, so `Σ K_i† K_i = I`.
pub fn random_diagonal_channel<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    n_ops: usize,
) -> KrausChannel {
    let columns: Vec<_> = (0..dim)
        .map(|_| random::orthonormal_columns(rng, n_ops, 1).remove(0))
        .collect();
    let ops = (0..n_ops)
        .map(|i| {
            ComplexMatrix::from_fn(
                dim,
                |r, col| if r == col { columns[r][i] } else { c(0.0, 0.0) },
            )
        })
        .collect();
    KrausChannel::new(ops, "diagonal").expect("unit columns give a channel")
}

/// `Σ p_i R_i ρ R_i` with Householder reflections `R_i = I - 2|v_i⟩⟨v_i|`,
/// so every Kraus operator is Hermitian.
pub fn random_reflection_channel<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    n_ops: usize,
) -> KrausChannel {
    let weights: Vec<f64> = (0..n_ops).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let ops = weights
        .iter()
        .map(|w| {
            let v = random::orthonormal_columns(rng, dim, 1).remove(0);
            let reflection =
                &ComplexMatrix::identity(dim) - &ComplexMatrix::outer(&v, &v).scale_real(2.0);
            reflection.scale_real((w / total).sqrt())
        })
        .collect();
    KrausChannel::new(ops, "reflections").expect("weights sum to one")
}

/// Midpoint convexity gap for `K = |0⟩⟨1|`, `(α, β) = (0.35, 0.3)` between
/// `diag(0.8, 0.2)` and `|0⟩⟨0|`. On `diag(1 - q, q)` the measure behaves
/// like `q^{1-α-β}/4` near `q = 0`, which is concave.
pub fn lowering_operator_convexity_gap() -> Result<f64> {
    let k = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0])?;
    let p = SkewParams::new(0.35, 0.3)?;
    let r1 = DensityMatrix::diagonal(&[0.8, 0.2])?;
    let r2 = DensityMatrix::diagonal(&[1.0, 0.0])?;
    let mid = DensityMatrix::mixture(0.5, &r1, &r2)?;
    Ok(mgwyd_op(&mid, &k, p)? - 0.5 * (mgwyd_op(&r1, &k, p)? + mgwyd_op(&r2, &k, p)?))
}

fn scaled(ch: &KrausChannel, factor: f64) -> KrausChannel {
    let ops = ch
        .kraus_ops()
        .iter()
        .map(|k| k.scale_real(factor.sqrt()))
        .collect();
    KrausChannel::new(ops, format!("{} x {factor}", ch.label()))
        .expect("scaling down keeps a channel")
}

fn full_commutator_i(rho: &DensityMatrix, ch: &KrausChannel, p: SkewParams) -> Result<f64> {
    let (ra, rb, rg) = (
        rho.power(p.alpha())?,
        rho.power(p.beta())?,
        rho.power(p.rest())?,
    );
    let mut total = 0.0;
    for k in ch.kraus_ops() {
        let comm = |x: &ComplexMatrix| &(x * k) - &(k * x);
        total += comm(&ra).dagger().trace_product(&(&comm(&rb) * &rg)).re;
    }
    Ok(total)
}

/// Runs every suite with `trials` random draws per invariant.
pub fn run_verify(seed: u64, trials: usize) -> Result<VerifyReport> {
    run_verify_with(seed, trials, None)
}

pub fn run_verify_with(
    seed: u64,
    trials: usize,
    mutation: Option<Mutation>,
) -> Result<VerifyReport> {
    if trials == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "trials",
            value: 0.0,
            range: ">= 1",
        });
    }
    let mut out = Collector {
        invariants: Vec::new(),
        observations: Vec::new(),
    };
    // Independent streams per suite keep each suite's draws stable when
    // another suite changes.
    let stream = |k: u64| random::rng(seed ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    skew_suite(&mut stream(1), trials, mutation, &mut out);
    coherence_suite(&mut stream(2), trials, &mut out);
    closed_form_suite(&mut stream(3), trials, &mut out);
    channel_suite(&mut stream(4), trials, &mut out);
    interferometer_suite(&mut stream(5), trials, &mut out);
    let cases = out.invariants.iter().map(|r| r.cases).sum();
    let pass = out.invariants.iter().all(|r| r.pass);
    Ok(VerifyReport {
        suite: "all",
        seed,
        trials,
        cases,
        pass,
        invariants: out.invariants,
        observations: out.observations,
    })
}

fn skew_suite(rng: &mut SeededRng, trials: usize, mutation: Option<Mutation>, out: &mut Collector) {
    const S: &str = "skew-measures";
    let mut dual = Check::new(S, "dual_path_trace_form", 1e-10);
    let mut cons_ij = Check::new(S, "conservation_ij", 1e-10);
    let mut cons_vw = Check::new(S, "conservation_vw", 1e-10);
    let mut unital_ij = Check::new(S, "unital_dyson_sum_is_one", 1e-10);
    let mut unital_vw = Check::new(S, "unital_wigner_yanase_vw_is_one", 1e-10);
    let mut order = Check::new(S, "orderings_and_signs", 1e-10);
    let mut cross = Check::new(S, "cross_term_identities", 1e-10);
    let mut sym = Check::new(S, "alpha_beta_symmetry", 1e-12);
    let mut remix = Check::new(S, "remix_invariance", 1e-10);
    let mut ancilla = Check::new(S, "ancillary_independence", 1e-10);
    let mut convex = Check::new(S, "convexity_hermitian_kraus", 1e-10);
    let mut general_convexity: f64 = 0.0;
    let mut herm = Check::new(S, "hermitian_reduction", 1e-12);
    let mut mwy = Check::new(S, "wigner_yanase_reduction", 1e-12);
    let mut v_eq_i = Check::new(S, "v_equals_i_on_diagonal", 1e-12);

    for t in 0..trials {
        let dim = 2 + t % 2;
        let rho = random_density_with(rng, dim);
        let tp = random_channel(rng, dim, 1 + t % 3);
        let ch = if t % 4 == 3 { scaled(&tp, 0.7) } else { tp };
        let p = random_params(rng);

        let bracket = match mutation {
            None => mgwyd_channel(&rho, &ch, p),
            Some(Mutation::FullCommutator) => full_commutator_i(&rho, &ch, p),
        };
        dual.record_result(trace_form_i(&rho, &ch, p).and_then(|tf| Ok(tf - bracket?)));

        match measure(&rho, &ch, p) {
            Ok(m) => {
                cons_ij.record(m.sum_ij - m.rhs_ij);
                cons_vw.record(m.sum_vw - m.rhs_vw);
                order.record(
                    violation(-m.i)
                        .max(violation(-m.v))
                        .max(violation(m.i - m.j))
                        .max(violation(m.v - m.w)),
                );
            }
            Err(_) => [&mut cons_ij, &mut cons_vw, &mut order]
                .into_iter()
                .for_each(|c| c.record(f64::INFINITY)),
        }

        let k = random::ginibre(rng, dim);
        let signs = c_term(&rho, &k, p).and_then(|cv| Ok((cv, d_term(&rho, &k, p)?)));
        order.record_result(signs.map(|(cv, dv)| violation(-cv).max(violation(-dv))));
        cross.record_result((|| {
            let ci = j_op(&rho, &k, p)? - mgwyd_op(&rho, &k, p)? - c_term(&rho, &k, p)?;
            let dv = w_op(&rho, &k, p)? - mwgwyd_op(&rho, &k, p)? - d_term(&rho, &k, p)?;
            Ok(ci.abs().max(dv.abs()))
        })());
        sym.record_result((|| {
            let q = p.swapped();
            let mut worst: f64 = 0.0;
            for f in [mgwyd_op, j_op, mwgwyd_op, w_op] {
                worst = worst.max((f(&rho, &k, p)? - f(&rho, &k, q)?).abs());
            }
            Ok(worst)
        })());

        let unital = random_unital_channel(rng, dim, 2 + t % 3);
        let dyson = SkewParams::dyson(rng.random_range(0.0..1.0)).expect("α in [0, 1]");
        unital_ij.record_result((|| {
            Ok(mgwyd_channel(&rho, &unital, dyson)? + j_channel(&rho, &unital, dyson)? - 1.0)
        })());
        let wy = SkewParams::WIGNER_YANASE;
        unital_vw.record_result((|| {
            Ok(mwgwyd_channel(&rho, &unital, wy)? + w_channel(&rho, &unital, wy)? - 1.0)
        })());

        let n = ch.kraus_ops().len();
        let w = Isometry::random(rng, n + 1 + t % 3, n);
        remix.record_result((|| {
            let mixed = ch.remix(&w)?;
            let mut worst: f64 = 0.0;
            for f in [mgwyd_channel, j_channel, mwgwyd_channel, w_channel] {
                worst = worst.max((f(&rho, &ch, p)? - f(&rho, &mixed, p)?).abs());
            }
            Ok(worst)
        })());

        let rho_a = random_density_with(rng, 2);
        let rho_b = random_density_with(rng, 2 + t % 2);
        let phi = random_channel(rng, 2, 2);
        ancilla.record_result((|| {
            let joint = rho_a.tensor(&rho_b);
            let extended = phi.tensor_with_identity(rho_b.dim());
            let i = mgwyd_channel(&joint, &extended, p)? - mgwyd_channel(&rho_a, &phi, p)?;
            let j = j_channel(&joint, &extended, p)? - j_channel(&rho_a, &phi, p)?;
            Ok(i.abs().max(j.abs()))
        })());

        let q = random_convex_params(rng);
        let (r1, r2) = (random_density_with(rng, dim), random_density_with(rng, dim));
        let s = rng.random_range(0.0..1.0);
        let h = random::hermitian(rng, dim);
        let reflections = random_reflection_channel(rng, dim, 2 + t % 3);
        let gaps = |k: &ComplexMatrix, ch: &KrausChannel| -> Result<(f64, f64)> {
            let mix = DensityMatrix::mixture(s, &r1, &r2)?;
            let op =
                mgwyd_op(&mix, k, q)? - s * mgwyd_op(&r1, k, q)? - (1.0 - s) * mgwyd_op(&r2, k, q)?;
            let chan = mgwyd_channel(&mix, ch, q)?
                - s * mgwyd_channel(&r1, ch, q)?
                - (1.0 - s) * mgwyd_channel(&r2, ch, q)?;
            Ok((op, chan))
        };
        convex.record_result(
            gaps(&h, &reflections).map(|(op, chan)| violation(op).max(violation(chan))),
        );
        if let Ok((op, chan)) = gaps(&k, &ch) {
            general_convexity = general_convexity.max(op).max(chan);
        }

        herm.record_result((|| {
            Ok(mgwyd_op(&rho, &h, p)? - 0.5 * gwyd_hermitian(&rho, &h, p)?)
        })());
        mwy.record_result((|| {
            let root = rho.power(0.5)?;
            let i = mgwyd_op(&rho, &k, wy)? - root.half_commutator(&k)?.hs_norm_sq();
            let j = j_op(&rho, &k, wy)? - root.half_anticommutator(&k)?.hs_norm_sq();
            Ok(i.abs().max(j.abs()))
        })());
        let a = rng.random_range(0.0..0.5);
        let diag = SkewParams::new(a, a).expect("2α ≤ 1");
        v_eq_i.record_result((|| {
            Ok(mwgwyd_channel(&rho, &ch, diag)? - mgwyd_channel(&rho, &ch, diag)?)
        })());
    }
    if let Ok(gap) = lowering_operator_convexity_gap() {
        general_convexity = general_convexity.max(gap);
    }
    out.observations.push(Observation {
        suite: S,
        name: "convexity_general_operators",
        cases: trials,
        value: general_convexity,
        detail: "largest convexity gap for non-Hermitian K and generic channels; positive values are counterexamples",
        bins: Vec::new(),
    });
    out.push([
        dual, cons_ij, cons_vw, unital_ij, unital_vw, order, cross, sym, remix, ancilla, convex,
        herm, mwy, v_eq_i,
    ]);
}

/// `Σ p_i I(ρ_i, Φ)` over the selective outcomes of `E`.
pub fn selective_average(
    rho: &DensityMatrix,
    e: &KrausChannel,
    phi: &KrausChannel,
    p: SkewParams,
) -> Result<f64> {
    let mut total = 0.0;
    for k in e.kraus_ops() {
        let branch = k.conjugate(rho.matrix());
        let weight = branch.trace().re;
        if weight < 1e-12 {
            continue;
        }
        let state = DensityMatrix::new(branch.scale_real(1.0 / weight).hermitian_part())?;
        total += weight * mgwyd_channel(&state, phi, p)?;
    }
    Ok(total)
}

fn coherence_suite(rng: &mut SeededRng, trials: usize, out: &mut Collector) {
    const S: &str = "skew-measures";
    let mut faithful_zero = Check::new(S, "faithfulness_zero_on_fixed_points", 1e-12);
    let mut faithful_fixed = Check::new(S, "faithfulness_fixed_point_conditions", 1e-6);
    let mut faithful_witness = Check::new(S, "faithfulness_positive_witness", 0.0);
    let mut mono_commuting = Check::new(S, "monotonicity_commuting_instances", 1e-10);
    let mut mono = Check::new(S, "monotonicity", 1e-10);
    let mut strong = Check::new(S, "strong_monotonicity", 1e-10);
    let mut printed_direction_failures = 0usize;

    for t in 0..trials {
        let lambda = rng.random_range(0.05..0.4);
        let diag = DensityMatrix::diagonal(&[lambda, 1.0 - lambda]).expect("probabilities");
        let p = SkewParams::new(rng.random_range(0.2..0.45), rng.random_range(0.2..0.45))
            .expect("sum below 1");

        let flip = phase_flip(rng.random_range(0.0..1.0)).expect("p in [0, 1]");
        match (
            mgwyd_channel(&diag, &flip, p),
            fixed_point_residuals(&diag, &flip, p),
        ) {
            (Ok(i), Ok(res)) => {
                faithful_zero.record(i);
                if i < 1e-12 {
                    faithful_fixed.record(res.into_iter().fold(0.0, f64::max));
                }
            }
            _ => faithful_zero.record(f64::INFINITY),
        }
        let bit = bit_flip(rng.random_range(0.5..1.0)).expect("p in [0, 1]");
        faithful_witness.record_result(mgwyd_channel(&diag, &bit, p).map(|i| violation(1e-4 - i)));

        // Both channels diagonal and the state diagonal: the hypotheses hold
        // for any (α, β), and both sides vanish.
        let dim = 2 + t % 2;
        let probs: Vec<f64> = (0..dim).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = probs.iter().sum();
        let diag_rho =
            DensityMatrix::diagonal(&probs.iter().map(|x| x / total).collect::<Vec<_>>())
                .expect("probabilities");
        let phi = random_diagonal_channel(rng, dim, 2);
        let e = random_diagonal_channel(rng, dim, 3);
        let q = random_params(rng);
        mono_commuting.record_result((|| {
            let before = mgwyd_channel(&diag_rho, &phi, q)?;
            let after = mgwyd_channel(&DensityMatrix::new(e.apply(diag_rho.matrix())?)?, &phi, q)?;
            let averaged = selective_average(&diag_rho, &e, &phi, q)?;
            Ok((after - before).abs().max((averaged - before).abs()))
        })());

        // Coherent qubit, phase-flip Φ, diagonal E, α + β = 1 so that
        // ρ^{1-α-β} = I commutes with every Kraus operator.
        let rho = random_density_with(rng, 2);
        let phi = phase_flip(rng.random_range(0.05..1.0)).expect("p in [0, 1]");
        let e = random_diagonal_channel(rng, 2, 3);
        let q = SkewParams::dyson(rng.random_range(0.05..0.95)).expect("α in [0, 1]");
        match (|| {
            let before = mgwyd_channel(&rho, &phi, q)?;
            let after = mgwyd_channel(&DensityMatrix::new(e.apply(rho.matrix())?)?, &phi, q)?;
            Ok::<_, Error>((before, after, selective_average(&rho, &e, &phi, q)?))
        })() {
            Ok((before, after, averaged)) => {
                mono.record(violation(after - before));
                strong.record(violation(averaged - before));
                if after < before - 1e-10 {
                    printed_direction_failures += 1;
                }
            }
            Err(_) => {
                mono.record(f64::INFINITY);
                strong.record(f64::INFINITY);
            }
        }
    }
    out.observations.push(Observation {
        suite: S,
        name: "monotonicity_reverse_direction_failures",
        cases: trials,
        value: printed_direction_failures as f64,
        detail:
            "instances where I(E(rho), Phi) >= I(rho, Phi) fails; the measure decreases under E",
        bins: Vec::new(),
    });
    out.push([
        faithful_zero,
        faithful_fixed,
        faithful_witness,
        mono_commuting,
        mono,
        strong,
    ]);
}

fn closed_form_suite(rng: &mut SeededRng, trials: usize, out: &mut Collector) {
    const S: &str = "closed-forms";
    let mut ci = Check::new(S, "closed_form_i_matches_kernel", 1e-10);
    let mut cv = Check::new(S, "closed_form_v_matches_kernel", 1e-10);
    let mut sym = Check::new(S, "closed_form_symmetry", 1e-14);
    let mut depol = Check::new(S, "depolarizing_monotone", 0.0);

    let compare =
        |r: &BlochVector, p: SkewParams, fam: QubitFamily, ci: &mut Check, cv: &mut Check| {
            let rho = DensityMatrix::from_bloch(r);
            match fam.channel() {
                Ok(ch) => {
                    ci.record_result((|| Ok(fam.closed_i(r, p)? - mgwyd_channel(&rho, &ch, p)?))());
                    cv.record_result(
                        (|| Ok(fam.closed_v(r, p)? - mwgwyd_channel(&rho, &ch, p)?))(),
                    );
                }
                Err(_) => {
                    ci.record(f64::INFINITY);
                    cv.record(f64::INFINITY);
                }
            }
        };
    let families = |s: f64| {
        [
            QubitFamily::Pauli(s / 3.0, s / 4.0, s / 5.0),
            QubitFamily::Depolarizing(s / 3.0),
            QubitFamily::BitFlip(s),
            QubitFamily::PhaseFlip(s),
            QubitFamily::AdUnital(s),
            QubitFamily::AdNonunital(s),
        ]
    };

    for t in 0..trials {
        let norm = rng.random_range(0.05..0.999);
        let r = random_bloch_with(rng, norm);
        let p = if t % 5 == 4 {
            SkewParams::dyson(rng.random_range(0.0..1.0)).expect("α in [0, 1]")
        } else {
            random_params(rng)
        };
        let s = rng.random_range(0.0..1.0);
        for fam in families(s) {
            compare(&r, p, fam, &mut ci, &mut cv);
            sym.record_result((|| {
                let q = p.swapped();
                Ok((fam.closed_i(&r, p)? - fam.closed_i(&r, q)?)
                    .abs()
                    .max((fam.closed_v(&r, p)? - fam.closed_v(&r, q)?).abs()))
            })());
        }
        let grid: Vec<f64> = (0..=10).map(|k| k as f64 / 30.0).collect();
        depol.record_result((|| {
            let mut worst: f64 = 0.0;
            for pair in grid.windows(2) {
                let (lo, hi) = (
                    QubitFamily::Depolarizing(pair[0]),
                    QubitFamily::Depolarizing(pair[1]),
                );
                worst = worst.max(violation(lo.closed_i(&r, p)? - hi.closed_i(&r, p)?));
                worst = worst.max(violation(lo.closed_v(&r, p)? - hi.closed_v(&r, p)?));
            }
            Ok(worst)
        })());
    }

    // Boundary draws: origin, pure states and the α + β = 1 edge.
    for t in 0..trials.min(50) {
        let r = if t % 2 == 0 {
            BlochVector::ORIGIN
        } else {
            random_bloch_with(rng, 1.0)
        };
        let a = rng.random_range(0.0..1.0);
        for p in [
            SkewParams::dyson(a).expect("α in [0, 1]"),
            random_params(rng),
        ] {
            for fam in families(rng.random_range(0.0..1.0)) {
                compare(&r, p, fam, &mut ci, &mut cv);
            }
        }
    }
    out.push([ci, cv, sym, depol]);
}

fn channel_suite(rng: &mut SeededRng, trials: usize, out: &mut Collector) {
    const S: &str = "channels";
    let mut twirl = Check::new(S, "twirl_idempotent", 1e-12);
    let mut tp = Check::new(S, "named_families_trace_preserving", 1e-10);
    let mut choi = Check::new(S, "choi_positive", 1e-10);

    for t in 0..trials {
        let x = random::hermitian(rng, 2);
        for ch in [twirl_z2(), twirl_pauli()] {
            twirl.record_result((|| {
                let once = ch.apply(&x)?;
                Ok(ch.apply(&once)?.distance(&once))
            })());
        }
        let s = rng.random_range(0.0..1.0);
        let id = ComplexMatrix::identity(2);
        for fam in [
            QubitFamily::Pauli(s / 3.0, s / 4.0, s / 5.0),
            QubitFamily::Depolarizing(s / 3.0),
            QubitFamily::BitFlip(s),
            QubitFamily::PhaseFlip(s),
        ] {
            tp.record_result(fam.channel().map(|ch| ch.completeness().distance(&id)));
        }
        for ch in [amplitude_damping_unital(s), amplitude_damping_nonunital(s)] {
            tp.record_result(ch.map(|ch| ch.completeness().distance(&id)));
        }
        let ch = random_channel(rng, 2 + t % 2, 1 + t % 4);
        choi.record_result(
            hermitian_eig(&ch.choi().hermitian_part()).map(|e| violation(-e.min_eigenvalue())),
        );
    }
    out.push([twirl, tp, choi]);
}

fn random_mz<R: Rng + ?Sized>(rng: &mut R, norm: f64, db: usize) -> MachZehnderConfig {
    let bloch = random_bloch_with(rng, norm);
    let tau = random_density_with(rng, db);
    let v = random::haar_unitary(rng, db);
    MachZehnderConfig::new(bloch, tau, v, rng.random_range(0.0..TAU))
        .expect("random config is valid")
}

fn interferometer_suite(rng: &mut SeededRng, trials: usize, out: &mut Collector) {
    const S: &str = "interferometer";
    let mut dilation = Check::new(S, "mz_kraus_matches_dilation", 1e-12);
    let mut tp = Check::new(S, "mz_trace_preserving", 1e-10);
    let mut pure = Check::new(S, "mz_closed_form_pure_states", 1e-8);
    let mut transverse = Check::new(S, "mz_transverse_weight_mixed_states", 1e-8);
    let mut sum = Check::new(S, "mz_i_plus_j_is_one", 1e-12);
    let mut duality = Check::new(S, "mz_duality", 1e-10);
    let mut extrema = Check::new(S, "mz_theta_extrema", 1e-8);
    let mut argext = Check::new(S, "mz_theta_extremum_location", 1e-5);
    let mut sym = Check::new(S, "mz_alpha_symmetry", 1e-14);

    const BINS: usize = 4;
    let mut bins = [(0usize, 0.0f64); BINS];
    let mut published_cases = 0;
    let mut published_max: f64 = 0.0;

    for t in 0..trials {
        let is_pure = t % 2 == 0;
        let norm = if is_pure {
            1.0
        } else {
            rng.random_range(0.0..0.999)
        };
        let cfg = random_mz(rng, norm, 2 + t % 2);
        let alpha = rng.random_range(0.0..1.0);
        let p = SkewParams::dyson(alpha).expect("α in [0, 1]");
        let rho = DensityMatrix::from_bloch(&cfg.bloch);

        let ch = match build_mz_channel(&cfg) {
            Ok(ch) => ch,
            Err(_) => {
                [&mut dilation, &mut tp]
                    .into_iter()
                    .for_each(|c| c.record(f64::INFINITY));
                continue;
            }
        };
        let probe = random_density_with(rng, 2);
        dilation.record_result((|| {
            Ok(ch
                .apply(probe.matrix())?
                .distance(&apply_dilation(&cfg, probe.matrix())?))
        })());
        tp.record(ch.completeness().distance(&ComplexMatrix::identity(2)));

        let kernel =
            (|| Ok::<_, Error>((mgwyd_channel(&rho, &ch, p)?, j_channel(&rho, &ch, p)?)))();
        if is_pure {
            pure.record_result(kernel.clone().and_then(|(i, j)| {
                Ok((i - i_alpha_mz(&cfg, alpha)?)
                    .abs()
                    .max((j - j_alpha_mz(&cfg, alpha)?).abs()))
            }));
        } else {
            transverse.record_result(kernel.clone().and_then(|(i, _)| {
                Ok(i - i_alpha_mz_weighted(&cfg, alpha, MzWeight::Transverse)?)
            }));
            if let (Ok((i, _)), Ok(published)) = (&kernel, i_alpha_mz(&cfg, alpha)) {
                let residual = (i - published).abs();
                let bin = ((cfg.bloch.norm() * BINS as f64) as usize).min(BINS - 1);
                bins[bin].0 += 1;
                bins[bin].1 = bins[bin].1.max(residual);
                published_cases += 1;
                published_max = published_max.max(residual);
            }
        }
        for weight in [MzWeight::Published, MzWeight::Transverse] {
            sum.record_result(
                MzCoefficients::new(&cfg, alpha, weight)
                    .map(|m| m.i_at(cfg.theta) + m.j_at(cfg.theta) - 1.0),
            );
        }
        for a in [0.0, 0.25, 0.5, 0.75, 1.0] {
            duality.record_result((|| {
                Ok(path_information(&cfg, a)? + visibility(&cfg, a)? - 1.0)
            })());
        }
        sym.record_result((|| {
            Ok(i_alpha_mz(&cfg, alpha)? - i_alpha_mz(&cfg, 1.0 - alpha)?)
        })());

        if t % 10 == 0 {
            if let Ok(m) = MzCoefficients::new(&cfg, alpha, MzWeight::Published) {
                let min = minimize_over_theta(|th| m.i_at(th));
                let max = maximize_over_theta(|th| m.j_at(th));
                extrema.record(
                    (min.value - m.path_information())
                        .abs()
                        .max((max.value - m.visibility()).abs()),
                );
                if m.oscillation > 1e-3 {
                    argext.record(
                        angle_gap(min.theta, m.phase)
                            .abs()
                            .max(angle_gap(max.theta, m.phase).abs()),
                    );
                }
            }
        }
    }
    out.observations.push(Observation {
        suite: S,
        name: "mz_published_weight_mixed_residual",
        cases: published_cases,
        value: published_max,
        detail: "|kernel - closed form| with the (1 - r1^2) weight on mixed external states; exact only at |r| = 1",
        bins: bins
            .iter()
            .enumerate()
            .map(|(k, &(cases, max_residual))| ResidualBin {
                norm_from: k as f64 / BINS as f64,
                norm_to: (k + 1) as f64 / BINS as f64,
                cases,
                max_residual,
            })
            .collect(),
    });
    out.push([
        dilation, tp, pure, transverse, sum, duality, extrema, argext, sym,
    ]);
}
