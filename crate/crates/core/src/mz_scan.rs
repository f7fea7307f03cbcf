//! θ scans of the Mach-Zehnder measures from a JSON config.
//!
//! Config: `{"bloch": [r1, r2, r3], "tau": <state>, "V": <matrix>,
//! "alpha": a, "theta_grid": n, "weight": "published" | "transverse"}`.
//! The grid is `θ_k = 2πk/n` for `k < n`.

use std::f64::consts::TAU;

use serde::Serialize;
use serde_json::Value;

use crate::descriptors::{
    number, parse_json, parse_matrix, DescriptorError, DescriptorResult, StateDescriptor,
};
use crate::interferometer::{build_mz_channel, MachZehnderConfig, MzCoefficients, MzWeight};
use crate::skew::{j_channel, mgwyd_channel, SkewParams};
use crate::states::{BlochVector, DensityMatrix};

#[derive(Debug, Clone)]
pub struct MzSpec {
    pub config: MachZehnderConfig,
    pub alpha: f64,
    pub theta_grid: usize,
    pub weight: MzWeight,
}

fn bloch(value: &Value) -> DescriptorResult<BlochVector> {
    let items = value
        .as_array()
        .filter(|a| a.len() == 3)
        .ok_or_else(|| DescriptorError::parse("bloch", "expected 3 numbers"))?;
    let r: Vec<f64> = items
        .iter()
        .enumerate()
        .map(|(i, x)| number(x, &format!("bloch[{i}]")))
        .collect::<Result<_, _>>()?;
    BlochVector::new(r[0], r[1], r[2]).map_err(|e| DescriptorError::invalid("bloch", e))
}

impl MzSpec {
    pub fn from_json(value: &Value) -> DescriptorResult<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| DescriptorError::parse("mz", "expected a JSON object"))?;
        let get = |key: &str| {
            obj.get(key)
                .ok_or_else(|| DescriptorError::parse(key, "missing"))
        };
        let r = bloch(get("bloch")?)?;
        let tau = StateDescriptor::from_json(get("tau")?)
            .and_then(|s| s.build())
            .map_err(|e| match e {
                DescriptorError::Parse { field, message } => {
                    DescriptorError::parse(format!("tau: {field}"), message)
                }
                DescriptorError::Invalid { field, source } => {
                    DescriptorError::invalid(format!("tau: {field}"), source)
                }
            })?;
        let v = parse_matrix(get("V")?, "V")?;
        let alpha = number(get("alpha")?, "alpha")?;
        SkewParams::dyson(alpha).map_err(|e| DescriptorError::invalid("alpha", e))?;
        let theta_grid = get("theta_grid")?
            .as_u64()
            .ok_or_else(|| DescriptorError::parse("theta_grid", "expected a nonnegative integer"))?
            as usize;
        let weight = match obj.get("weight") {
            None => MzWeight::default(),
            Some(w) => serde_json::from_value(w.clone()).map_err(|_| {
                DescriptorError::parse("weight", "expected \"published\" or \"transverse\"")
            })?,
        };
        let config =
            MachZehnderConfig::new(r, tau, v, 0.0).map_err(|e| DescriptorError::invalid("V", e))?;
        Ok(Self {
            config,
            alpha,
            theta_grid,
            weight,
        })
    }

    pub fn parse_str(text: &str) -> DescriptorResult<Self> {
        Self::from_json(&parse_json(text, "mz")?)
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.theta_grid)
            .map(|k| TAU * k as f64 / self.theta_grid as f64)
            .collect()
    }
}

/// Kernel values on the grid plus the closed-form duality pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MzScan {
    pub alpha: f64,
    pub weight: MzWeight,
    pub theta: Vec<f64>,
    #[serde(rename = "I_alpha")]
    pub i_alpha: Vec<f64>,
    #[serde(rename = "J_alpha")]
    pub j_alpha: Vec<f64>,
    /// Largest `|kernel - closed form|` of `I_α` over the grid.
    pub closed_form_residual: f64,
    #[serde(rename = "P_tilde")]
    pub p_tilde: f64,
    #[serde(rename = "W_tilde")]
    pub w_tilde: f64,
    pub duality_residual: f64,
}

pub fn run_mz_scan(spec: &MzSpec) -> DescriptorResult<MzScan> {
    fn invalid(field: &str) -> impl Fn(crate::error::Error) -> DescriptorError + '_ {
        move |e| DescriptorError::invalid(field, e)
    }
    let p = SkewParams::dyson(spec.alpha).map_err(invalid("alpha"))?;
    let coeffs =
        MzCoefficients::new(&spec.config, spec.alpha, spec.weight).map_err(invalid("mz"))?;
    let rho = DensityMatrix::from_bloch(&spec.config.bloch);
    let theta = spec.thetas();
    let mut i_alpha = Vec::with_capacity(theta.len());
    let mut j_alpha = Vec::with_capacity(theta.len());
    let mut closed_form_residual: f64 = 0.0;
    for &th in &theta {
        let at = format!("theta={th}");
        let ch = build_mz_channel(&spec.config.with_theta(th)).map_err(invalid(&at))?;
        let i = mgwyd_channel(&rho, &ch, p).map_err(invalid(&at))?;
        i_alpha.push(i);
        j_alpha.push(j_channel(&rho, &ch, p).map_err(invalid(&at))?);
        closed_form_residual = closed_form_residual.max((i - coeffs.i_at(th)).abs());
    }
    let (p_tilde, w_tilde) = (coeffs.path_information(), coeffs.visibility());
    Ok(MzScan {
        alpha: spec.alpha,
        weight: spec.weight,
        theta,
        i_alpha,
        j_alpha,
        closed_form_residual,
        p_tilde,
        w_tilde,
        duality_residual: (p_tilde + w_tilde - 1.0).abs(),
    })
}
