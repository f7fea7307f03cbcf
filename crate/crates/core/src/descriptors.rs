//! JSON descriptors for states and channels.
//!
//! States: `{"bloch": [r1, r2, r3]}` or `{"matrix": [[z, ...], ...]}`.
//! Channels: `{"name": "...", "params": {...}}` or `{"kraus": [m, ...]}`.
//! A complex entry `z` is either a number or a pair `[re, im]`.

use serde_json::{Map, Value};

use crate::channels::{self, KrausChannel};
use crate::closed_form::QubitFamily;
use crate::error::Error;
use crate::matrix::{c, ComplexMatrix};
use crate::states::{BlochVector, DensityMatrix};

/// Malformed input versus well-formed input that violates an invariant.
#[derive(Debug, thiserror::Error, PartialEq)]
pub enum DescriptorError {
    #[error("{field}: {message}")]
    Parse { field: String, message: String },
    #[error("{field}: {source}")]
    Invalid { field: String, source: Error },
}

impl DescriptorError {
    pub fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Parse {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn invalid(field: impl Into<String>, source: Error) -> Self {
        Self::Invalid {
            field: field.into(),
            source,
        }
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Self::Parse { .. })
    }
}

pub type DescriptorResult<T> = std::result::Result<T, DescriptorError>;

fn object<'a>(value: &'a Value, field: &str) -> DescriptorResult<&'a Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| DescriptorError::parse(field, "expected a JSON object"))
}

pub fn number(value: &Value, field: &str) -> DescriptorResult<f64> {
    value
        .as_f64()
        .ok_or_else(|| DescriptorError::parse(field, format!("expected a number, found {value}")))
}

fn array<'a>(value: &'a Value, field: &str) -> DescriptorResult<&'a Vec<Value>> {
    value
        .as_array()
        .ok_or_else(|| DescriptorError::parse(field, "expected an array"))
}

/// Parses `[[z, ...], ...]` into a square matrix.
pub fn parse_matrix(value: &Value, field: &str) -> DescriptorResult<ComplexMatrix> {
    let rows = array(value, field)?;
    let mut data = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let row_field = format!("{field}[{i}]");
        let entries = array(row, &row_field)?;
        if entries.len() != rows.len() {
            return Err(DescriptorError::parse(
                row_field,
                format!("row has {} entries, expected {}", entries.len(), rows.len()),
            ));
        }
        for (j, entry) in entries.iter().enumerate() {
            let entry_field = format!("{field}[{i}][{j}]");
            let z = match entry {
                Value::Array(pair) if pair.len() == 2 => c(
                    number(&pair[0], &entry_field)?,
                    number(&pair[1], &entry_field)?,
                ),
                Value::Number(_) => c(number(entry, &entry_field)?, 0.0),
                _ => {
                    return Err(DescriptorError::parse(
                        entry_field,
                        "expected a number or [re, im]",
                    ))
                }
            };
            data.push(z);
        }
    }
    ComplexMatrix::new(rows.len(), data).map_err(|e| DescriptorError::invalid(field, e))
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateDescriptor {
    Bloch(BlochVector),
    Matrix(ComplexMatrix),
}

impl StateDescriptor {
    pub fn from_json(value: &Value) -> DescriptorResult<Self> {
        let obj = object(value, "state")?;
        if let Some(b) = obj.get("bloch") {
            let items = array(b, "state.bloch")?;
            if items.len() != 3 {
                return Err(DescriptorError::parse(
                    "state.bloch",
                    format!("expected 3 components, found {}", items.len()),
                ));
            }
            let r: Vec<f64> = items
                .iter()
                .enumerate()
                .map(|(i, x)| number(x, &format!("state.bloch[{i}]")))
                .collect::<Result<_, _>>()?;
            let bloch = BlochVector::new(r[0], r[1], r[2])
                .map_err(|e| DescriptorError::invalid("state.bloch", e))?;
            return Ok(Self::Bloch(bloch));
        }
        if let Some(m) = obj.get("matrix") {
            return Ok(Self::Matrix(parse_matrix(m, "state.matrix")?));
        }
        Err(DescriptorError::parse(
            "state",
            "expected a \"bloch\" or \"matrix\" key",
        ))
    }

    pub fn parse_str(text: &str) -> DescriptorResult<Self> {
        Self::from_json(&parse_json(text, "state")?)
    }

    pub fn build(&self) -> DescriptorResult<DensityMatrix> {
        match self {
            Self::Bloch(r) => Ok(DensityMatrix::from_bloch(r)),
            Self::Matrix(m) => DensityMatrix::new(m.clone())
                .map_err(|e| DescriptorError::invalid("state.matrix", e)),
        }
    }
}

pub fn parse_json(text: &str, field: &str) -> DescriptorResult<Value> {
    serde_json::from_str(text).map_err(|e| DescriptorError::parse(field, e.to_string()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelDescriptor {
    /// `(p0, p1, p2, p3)`.
    Pauli([f64; 4]),
    Depolarizing(f64),
    BitFlip(f64),
    PhaseFlip(f64),
    AdUnital(f64),
    AdNonunital(f64),
    TwirlZ2,
    TwirlPauli,
    Kraus(Vec<ComplexMatrix>),
}

impl ChannelDescriptor {
    pub fn from_json(value: &Value) -> DescriptorResult<Self> {
        let obj = object(value, "channel")?;
        if let Some(list) = obj.get("kraus") {
            let ops = array(list, "channel.kraus")?
                .iter()
                .enumerate()
                .map(|(i, m)| parse_matrix(m, &format!("channel.kraus[{i}]")))
                .collect::<Result<_, _>>()?;
            return Ok(Self::Kraus(ops));
        }
        let name = obj
            .get("name")
            .ok_or_else(|| {
                DescriptorError::parse("channel", "expected a \"name\" or \"kraus\" key")
            })?
            .as_str()
            .ok_or_else(|| DescriptorError::parse("channel.name", "expected a string"))?;
        let empty = Map::new();
        let params = match obj.get("params") {
            Some(p) => object(p, "channel.params")?,
            None => &empty,
        };
        let scalar = |key: &str| -> DescriptorResult<f64> {
            let field = format!("channel.params.{key}");
            number(
                params
                    .get(key)
                    .ok_or_else(|| DescriptorError::parse(&field, "missing"))?,
                &field,
            )
        };
        let optional = |key: &str| -> DescriptorResult<Option<f64>> {
            params
                .get(key)
                .map(|v| number(v, &format!("channel.params.{key}")))
                .transpose()
        };
        let desc = match name {
            "pauli" => {
                let [p1, p2, p3] = ["p1", "p2", "p3"].map(&optional);
                let (p1, p2, p3) = (p1?.unwrap_or(0.0), p2?.unwrap_or(0.0), p3?.unwrap_or(0.0));
                let p0 = optional("p0")?.unwrap_or(1.0 - p1 - p2 - p3);
                Self::Pauli([p0, p1, p2, p3])
            }
            "depolarizing" => Self::Depolarizing(scalar("p")?),
            "bit_flip" => Self::BitFlip(scalar("p")?),
            "phase_flip" => Self::PhaseFlip(scalar("p")?),
            "ad_unital" => Self::AdUnital(scalar("q")?),
            "ad_nonunital" => Self::AdNonunital(scalar("q")?),
            "twirl_z2" => Self::TwirlZ2,
            "twirl_pauli" => Self::TwirlPauli,
            other => {
                return Err(DescriptorError::parse(
                    "channel.name",
                    format!("unknown channel {other:?}"),
                ))
            }
        };
        Ok(desc)
    }

    pub fn parse_str(text: &str) -> DescriptorResult<Self> {
        Self::from_json(&parse_json(text, "channel")?)
    }

    pub fn build(&self) -> DescriptorResult<KrausChannel> {
        let built = match self {
            Self::Pauli([p0, p1, p2, p3]) => channels::pauli_channel(*p0, *p1, *p2, *p3),
            Self::Depolarizing(p) => channels::depolarizing(*p),
            Self::BitFlip(p) => channels::bit_flip(*p),
            Self::PhaseFlip(p) => channels::phase_flip(*p),
            Self::AdUnital(q) => channels::amplitude_damping_unital(*q),
            Self::AdNonunital(q) => channels::amplitude_damping_nonunital(*q),
            Self::TwirlZ2 => Ok(channels::twirl_z2()),
            Self::TwirlPauli => Ok(channels::twirl_pauli()),
            Self::Kraus(ops) => KrausChannel::new(ops.clone(), "kraus"),
        };
        built.map_err(|e| DescriptorError::invalid(self.field(), e))
    }

    fn field(&self) -> &'static str {
        match self {
            Self::Kraus(_) => "channel.kraus",
            Self::TwirlZ2 | Self::TwirlPauli => "channel.name",
            _ => "channel.params",
        }
    }

    /// The single scalar parameter of a one-parameter family.
    pub fn strength(&self) -> Option<f64> {
        match *self {
            Self::Depolarizing(x)
            | Self::BitFlip(x)
            | Self::PhaseFlip(x)
            | Self::AdUnital(x)
            | Self::AdNonunital(x) => Some(x),
            _ => None,
        }
    }

    /// Same family with the scalar parameter replaced.
    pub fn with_strength(&self, s: f64) -> Option<Self> {
        Some(match self {
            Self::Depolarizing(_) => Self::Depolarizing(s),
            Self::BitFlip(_) => Self::BitFlip(s),
            Self::PhaseFlip(_) => Self::PhaseFlip(s),
            Self::AdUnital(_) => Self::AdUnital(s),
            Self::AdNonunital(_) => Self::AdNonunital(s),
            _ => return None,
        })
    }

    /// The closed-form family, when the channel has one.
    pub fn qubit_family(&self) -> Option<QubitFamily> {
        Some(match *self {
            Self::Pauli([_, p1, p2, p3]) => QubitFamily::Pauli(p1, p2, p3),
            Self::Depolarizing(p) => QubitFamily::Depolarizing(p),
            Self::BitFlip(p) => QubitFamily::BitFlip(p),
            Self::PhaseFlip(p) => QubitFamily::PhaseFlip(p),
            Self::AdUnital(q) => QubitFamily::AdUnital(q),
            Self::AdNonunital(q) => QubitFamily::AdNonunital(q),
            _ => return None,
        })
    }
}
