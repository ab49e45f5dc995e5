//! JSON series documents.
//!
//! ```json
//! {"window": 8, "mode": "exact", "coeffs": {"1": ["1/1", "0/1"], "6": ["-1/2", "0/1"]}}
//! ```
//!
//! Exact parts are strings `"p/q"`; float parts are JSON numbers. Keys are
//! decimal indices written in increasing numeric order.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::scalar::{format_rational, parse_rational, QComplex, ScalarMode};
use super::series::Series;
use super::DynSeries;
use crate::error::{Error, Result};

/// Raw document shape; `provenance` is carried through untouched.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesDocument {
    pub window: u64,
    pub mode: ScalarMode,
    pub coeffs: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Value>,
}

pub(crate) fn exact_pair(z: &QComplex) -> Value {
    Value::Array(vec![
        Value::String(format_rational(&z.re)),
        Value::String(format_rational(&z.im)),
    ])
}

pub(crate) fn float_pair(z: &Complex64) -> Value {
    Value::Array(vec![float_value(z.re), float_value(z.im)])
}

fn float_value(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn pair_parts(v: &Value) -> Result<(&Value, &Value)> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok((re, im)),
        _ => Err(Error::Parse(format!(
            "coefficient must be [re, im], got {v}"
        ))),
    }
}

pub(crate) fn parse_exact_pair(v: &Value) -> Result<QComplex> {
    let (re, im) = pair_parts(v)?;
    let part = |x: &Value| match x {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!(
            "exact part must be a \"p/q\" string, got {other}"
        ))),
    };
    Ok(QComplex::new(part(re)?, part(im)?))
}

pub(crate) fn parse_float_pair(v: &Value) -> Result<Complex64> {
    let (re, im) = pair_parts(v)?;
    let part = |x: &Value| {
        x.as_f64()
            .ok_or_else(|| Error::Parse(format!("float part must be a number, got {x}")))
    };
    Ok(Complex64::new(part(re)?, part(im)?))
}

/// Serializes a series (with optional provenance) to a JSON value.
pub fn series_to_json(series: &DynSeries, provenance: Option<Value>) -> Value {
    let mut coeffs = Map::new();
    match series {
        DynSeries::Exact(s) => {
            for (n, c) in s.iter() {
                coeffs.insert(n.to_string(), exact_pair(c));
            }
        }
        DynSeries::Float(s) => {
            for (n, c) in s.iter() {
                coeffs.insert(n.to_string(), float_pair(c));
            }
        }
    }
    let doc = SeriesDocument {
        window: series.window(),
        mode: series.mode(),
        coeffs,
        provenance,
    };
    serde_json::to_value(doc).expect("series document serializes")
}

/// Parses a series document.
pub fn series_from_json(value: &Value) -> Result<DynSeries> {
    let doc: SeriesDocument = serde_json::from_value(value.clone())
        .map_err(|e| Error::Parse(format!("series document: {e}")))?;
    let mut exact = BTreeMap::new();
    let mut float = BTreeMap::new();
    for (key, v) in &doc.coeffs {
        let n: u64 = key
            .parse()
            .map_err(|_| Error::Parse(format!("coefficient key {key:?} is not an index")))?;
        match doc.mode {
            ScalarMode::Exact => {
                exact.insert(n, parse_exact_pair(v)?);
            }
            ScalarMode::Float => {
                float.insert(n, parse_float_pair(v)?);
            }
        }
    }
    Ok(match doc.mode {
        ScalarMode::Exact => DynSeries::Exact(Series::from_coeffs(doc.window, exact)?),
        ScalarMode::Float => DynSeries::Float(Series::from_coeffs(doc.window, float)?),
    })
}
