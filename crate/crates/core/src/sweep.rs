//! Parameter sweeps over `α × β × strength` grids.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::channels::KrausChannel;
use crate::descriptors::{
    number, parse_json, ChannelDescriptor, DescriptorError, DescriptorResult, StateDescriptor,
};
use crate::skew::{measure, SkewParams};
use crate::states::DensityMatrix;

pub const CSV_HEADER: [&str; 11] = [
    "alpha", "beta", "strength", "I", "J", "V", "W", "sum_IJ", "rhs_IJ", "sum_VW", "rhs_VW",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format {other:?}, expected csv or json")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub state: StateDescriptor,
    pub channel: ChannelDescriptor,
    pub alpha_grid: Vec<f64>,
    pub beta_grid: Vec<f64>,
    /// `None` evaluates the channel as given.
    pub strength_grid: Option<Vec<f64>>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

fn grid(obj: &serde_json::Map<String, Value>, key: &str) -> DescriptorResult<Option<Vec<f64>>> {
    let Some(value) = obj.get(key) else {
        return Ok(None);
    };
    let items = value
        .as_array()
        .ok_or_else(|| DescriptorError::parse(key, "expected an array of numbers"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| number(x, &format!("{key}[{i}]")))
        .collect::<Result<_, _>>()
        .map(Some)
}

impl SweepSpec {
    pub fn from_json(value: &Value) -> DescriptorResult<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| DescriptorError::parse("grid", "expected a JSON object"))?;
        let state = StateDescriptor::from_json(
            obj.get("state")
                .ok_or_else(|| DescriptorError::parse("state", "missing"))?,
        )?;
        let channel = ChannelDescriptor::from_json(
            obj.get("channel")
                .ok_or_else(|| DescriptorError::parse("channel", "missing"))?,
        )?;
        let alpha_grid = grid(obj, "alpha_grid")?
            .ok_or_else(|| DescriptorError::parse("alpha_grid", "missing"))?;
        let beta_grid = grid(obj, "beta_grid")?
            .ok_or_else(|| DescriptorError::parse("beta_grid", "missing"))?;
        let strength_grid = grid(obj, "strength_grid")?;
        let output = match obj.get("output") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(PathBuf::from(s)),
            Some(_) => return Err(DescriptorError::parse("output", "expected a path string")),
        };
        let format = match obj.get("format") {
            None => OutputFormat::Csv,
            Some(Value::String(s)) => s
                .parse()
                .map_err(|e: String| DescriptorError::parse("format", e))?,
            Some(_) => {
                return Err(DescriptorError::parse(
                    "format",
                    "expected \"csv\" or \"json\"",
                ))
            }
        };
        let spec = Self {
            state,
            channel,
            alpha_grid,
            beta_grid,
            strength_grid,
            output,
            format,
        };
        spec.check_params()?;
        Ok(spec)
    }

    pub fn parse_str(text: &str) -> DescriptorResult<Self> {
        Self::from_json(&parse_json(text, "grid")?)
    }

    /// Every `(α, β)` pair of the product grid must be admissible.
    fn check_params(&self) -> DescriptorResult<()> {
        for (i, &a) in self.alpha_grid.iter().enumerate() {
            for (j, &b) in self.beta_grid.iter().enumerate() {
                SkewParams::new(a, b).map_err(|e| {
                    DescriptorError::invalid(format!("alpha_grid[{i}]={a}, beta_grid[{j}]={b}"), e)
                })?;
            }
        }
        if self.strength_grid.is_some() && self.channel.strength().is_none() {
            return Err(DescriptorError::parse(
                "strength_grid",
                "channel has no scalar strength parameter",
            ));
        }
        Ok(())
    }

    fn channels(&self) -> DescriptorResult<Vec<(Option<f64>, KrausChannel)>> {
        match &self.strength_grid {
            None => Ok(vec![(self.channel.strength(), self.channel.build()?)]),
            Some(grid) => grid
                .iter()
                .enumerate()
                .map(|(k, &s)| {
                    let desc = self
                        .channel
                        .with_strength(s)
                        .expect("checked at parse time");
                    let ch = desc.build().map_err(|e| match e {
                        DescriptorError::Invalid { source, .. } => {
                            DescriptorError::invalid(format!("strength_grid[{k}]={s}"), source)
                        }
                        other => other,
                    })?;
                    Ok((Some(s), ch))
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta: f64,
    pub strength: Option<f64>,
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
}

/// Evaluates the grid in parallel; rows come back in `α`, `β`, strength order.
pub fn run_sweep(spec: &SweepSpec) -> DescriptorResult<Vec<SweepRow>> {
    let rho: DensityMatrix = spec.state.build()?;
    let channels = spec.channels()?;
    let n = channels.len();
    let points: Vec<(f64, f64, usize)> = spec
        .alpha_grid
        .iter()
        .flat_map(|&a| {
            spec.beta_grid
                .iter()
                .flat_map(move |&b| (0..n).map(move |k| (a, b, k)))
        })
        .collect();
    points
        .par_iter()
        .map(|&(alpha, beta, k)| {
            let (strength, ch) = &channels[k];
            let at = || match strength {
                Some(s) => format!("alpha={alpha}, beta={beta}, strength={s}"),
                None => format!("alpha={alpha}, beta={beta}"),
            };
            let p = SkewParams::new(alpha, beta).map_err(|e| DescriptorError::invalid(at(), e))?;
            let r = measure(&rho, ch, p).map_err(|e| DescriptorError::invalid(at(), e))?;
            Ok(SweepRow {
                alpha,
                beta,
                strength: *strength,
                i: r.i,
                j: r.j,
                v: r.v,
                w: r.w,
                sum_ij: r.sum_ij,
                rhs_ij: r.rhs_ij,
                sum_vw: r.sum_vw,
                rhs_vw: r.rhs_vw,
            })
        })
        .collect()
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for r in rows {
        let mut record = vec![
            format_float(r.alpha),
            format_float(r.beta),
            r.strength.map(format_float).unwrap_or_default(),
        ];
        record
            .extend([r.i, r.j, r.v, r.w, r.sum_ij, r.rhs_ij, r.sum_vw, r.rhs_vw].map(format_float));
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    writeln!(out)
}
