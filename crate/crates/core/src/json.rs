//! Canonical JSON and the on-disk schemas.
//!
//! Canonical form: object keys sorted, two-space indentation, LF line
//! endings, a trailing newline, integers printed as integers and floats in
//! `{:.16e}` notation. Equal documents therefore serialize to equal bytes.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::cochain::{CochainError, DeligneCochain, Entry};
use crate::complex::SimplexId;
use crate::cover::CoveredComplex;
use crate::scalar::{Exact, Scalar};

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("entry {index}: {message}")]
    Entry { index: usize, message: String },
    #[error(transparent)]
    Cochain(#[from] CochainError),
}

fn write_float(out: &mut String, x: f64) {
    if x.is_finite() {
        let _ = write!(out, "{x:.16e}");
    } else {
        out.push_str("null");
    }
}

fn write_string(out: &mut String, s: &str) {
    out.push_str(&serde_json::to_string(s).expect("strings serialize"));
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n("  ", n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                write_float(out, n.as_f64().unwrap_or(f64::NAN));
            }
        }
        Value::String(s) => write_string(out, s),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // short arrays of scalars stay on one line
            if items.len() <= 8 && items.iter().all(|i| !i.is_array() && !i.is_object()) {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, item, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_value(out, item, indent + 1);
                if k + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (k, key) in keys.iter().enumerate() {
                pad(out, indent + 1);
                write_string(out, key);
                out.push_str(": ");
                write_value(out, &map[*key], indent + 1);
                if k + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

pub fn canonical(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

pub fn to_canonical<T: Serialize>(t: &T) -> String {
    canonical(&serde_json::to_value(t).expect("schema types serialize"))
}

pub fn parse<T: for<'de> Deserialize<'de>>(path: &str, text: &str) -> Result<T, SchemaError> {
    serde_json::from_str(text).map_err(|e| SchemaError::Parse {
        path: path.to_string(),
        message: format!("line {} column {}: {e}", e.line(), e.column()),
    })
}

pub fn read<T: for<'de> Deserialize<'de>>(path: &str) -> Result<T, SchemaError> {
    let text = std::fs::read_to_string(path).map_err(|e| SchemaError::Io { path: path.to_string(), message: e.to_string() })?;
    parse(path, &text)
}

fn ratio_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_ratio(s: &str) -> Option<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.trim().parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if d.is_zero() {
        None
    } else {
        Some(BigRational::new(n, d))
    }
}

/// One stored value. Floats use `value`; exact values use `rational` and
/// `turns` (meaning `rational + 2π·turns`), both `"p/q"` strings. Any
/// combination is accepted on input and summed.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub turns: Option<String>,
}

/// Serialization of cochain values for each backend.
pub trait ScalarJson: Scalar {
    const MODE: &'static str;
    fn to_value_file(&self) -> ValueFile;
    fn from_value_file(v: &ValueFile) -> Result<Self, String>;

    /// Report form: the float value, plus exact parts where available.
    fn report(&self) -> Value {
        let v = self.to_value_file();
        let mut map = serde_json::Map::new();
        map.insert("value".into(), Value::from(self.to_f64()));
        if let Some(r) = v.rational {
            map.insert("rational".into(), Value::from(r));
        }
        if let Some(t) = v.turns {
            map.insert("turns".into(), Value::from(t));
        }
        Value::Object(map)
    }
}

impl ScalarJson for f64 {
    const MODE: &'static str = "float";

    fn to_value_file(&self) -> ValueFile {
        ValueFile { value: Some(*self), ..ValueFile::default() }
    }

    fn from_value_file(v: &ValueFile) -> Result<Self, String> {
        let mut x = v.value.unwrap_or(0.0);
        if let Some(r) = &v.rational {
            x += parse_ratio(r).and_then(|q| q.to_f64()).ok_or_else(|| format!("bad rational {r:?}"))?;
        }
        if let Some(t) = &v.turns {
            x += std::f64::consts::TAU * parse_ratio(t).and_then(|q| q.to_f64()).ok_or_else(|| format!("bad turns {t:?}"))?;
        }
        Ok(x)
    }
}

impl ScalarJson for Exact {
    const MODE: &'static str = "rational";

    fn to_value_file(&self) -> ValueFile {
        ValueFile {
            value: None,
            rational: Some(ratio_string(&self.rational)),
            turns: Some(ratio_string(&self.turns)),
        }
    }

    fn from_value_file(v: &ValueFile) -> Result<Self, String> {
        let mut x = match v.value {
            Some(f) if !f.is_finite() => return Err("non-finite value".into()),
            Some(f) => Exact::from_f64(f),
            None => Exact::zero(),
        };
        if let Some(r) = &v.rational {
            x = x + Exact::new(parse_ratio(r).ok_or_else(|| format!("bad rational {r:?}"))?, BigRational::zero());
        }
        if let Some(t) = &v.turns {
            x = x + Exact::new(BigRational::zero(), parse_ratio(t).ok_or_else(|| format!("bad turns {t:?}"))?);
        }
        Ok(x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryFile {
    pub k: usize,
    pub indices: Vec<usize>,
    /// Vertex labels of the simplex.
    pub simplex: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub turns: Option<String>,
}

impl EntryFile {
    fn value_file(&self) -> ValueFile {
        ValueFile { value: self.value, rational: self.rational.clone(), turns: self.turns.clone() }
    }
}

/// Cochain file: nonzero entries in canonical order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainFile {
    pub degree: usize,
    pub arithmetic: String,
    pub entries: Vec<EntryFile>,
}

pub fn cochain_to_file<S: ScalarJson>(c: &DeligneCochain<S>) -> CochainFile {
    let complex = c.base().complex();
    CochainFile {
        degree: c.degree(),
        arithmetic: S::MODE.to_string(),
        entries: c
            .entries()
            .into_iter()
            .map(|e| {
                let v = e.value.to_value_file();
                EntryFile {
                    k: e.k,
                    indices: e.indices,
                    simplex: complex.simplices(e.simplex.dim)[e.simplex.index].vertices().to_vec(),
                    value: v.value,
                    rational: v.rational,
                    turns: v.turns,
                }
            })
            .collect(),
    }
}

pub fn cochain_from_file<S: ScalarJson>(
    base: Arc<CoveredComplex>,
    file: &CochainFile,
) -> Result<DeligneCochain<S>, SchemaError> {
    let complex = base.complex();
    let mut entries = Vec::with_capacity(file.entries.len());
    for (index, e) in file.entries.iter().enumerate() {
        let mut verts = e.simplex.clone();
        verts.sort_unstable();
        let id: SimplexId = complex
            .find(&verts)
            .ok_or_else(|| SchemaError::Entry { index, message: format!("no simplex {:?}", e.simplex) })?;
        let value = S::from_value_file(&e.value_file()).map_err(|message| SchemaError::Entry { index, message })?;
        entries.push(Entry { k: e.k, indices: e.indices.clone(), simplex: id, value });
    }
    Ok(DeligneCochain::from_entries(base, file.degree, &entries)?)
}
