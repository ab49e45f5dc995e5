//! JSON encodings of suite inputs.

use std::collections::{BTreeMap, BTreeSet};

use dirichlet::arith::{
    format_rational, parse_rational, series_from_json, series_to_json, DynSeries, ExactSeries,
    FloatSeries, QComplex,
};
use dirichlet::group::{Permutation, PermutationGroup};
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub fn field<'a>(v: &'a Value, key: &str) -> CliResult<&'a Value> {
    v.get(key)
        .ok_or_else(|| CliError::usage(format!("inputs lack {key:?}")))
}

pub fn get<T: DeserializeOwned>(v: &Value, key: &str) -> CliResult<T> {
    serde_json::from_value(field(v, key)?.clone())
        .map_err(|e| CliError::usage(format!("input {key:?}: {e}")))
}

pub fn exact(s: &ExactSeries) -> Value {
    series_to_json(&DynSeries::Exact(s.clone()), None)
}

pub fn float(s: &FloatSeries) -> Value {
    series_to_json(&DynSeries::Float(s.clone()), None)
}

pub fn get_exact(v: &Value, key: &str) -> CliResult<ExactSeries> {
    match series_from_json(field(v, key)?)? {
        DynSeries::Exact(s) => Ok(s),
        DynSeries::Float(_) => Err(CliError::usage(format!(
            "input {key:?} must be an exact series"
        ))),
    }
}

pub fn get_float(v: &Value, key: &str) -> CliResult<FloatSeries> {
    Ok(series_from_json(field(v, key)?)?.to_float())
}

pub fn perm(p: &Permutation) -> Value {
    Value::String(p.to_string())
}

pub fn get_perm(v: &Value, key: &str) -> CliResult<Permutation> {
    Ok(get::<String>(v, key)?.parse()?)
}

pub fn group(g: &PermutationGroup) -> Value {
    Value::Array(g.generators().iter().map(perm).collect())
}

pub fn get_group(v: &Value, key: &str) -> CliResult<PermutationGroup> {
    let gens: Vec<String> = get(v, key)?;
    let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
    Ok(PermutationGroup::parse(&refs)?)
}

pub fn rational(q: &BigRational) -> Value {
    Value::String(format_rational(q))
}

pub fn complex_rational(z: &QComplex) -> Value {
    Value::Array(vec![rational(&z.re), rational(&z.im)])
}

pub fn get_complex_rational(v: &Value, key: &str) -> CliResult<QComplex> {
    let [re, im]: [String; 2] = get(v, key)?;
    Ok(QComplex::new(parse_rational(&re)?, parse_rational(&im)?))
}

pub fn get_index_set(v: &Value, key: &str) -> CliResult<BTreeSet<usize>> {
    get(v, key)
}

/// Phase or degree maps keyed by variable index, stored with string keys.
pub fn get_var_map<T: DeserializeOwned>(v: &Value, key: &str) -> CliResult<BTreeMap<usize, T>> {
    let raw: BTreeMap<String, T> = get(v, key)?;
    raw.into_iter()
        .map(|(k, x)| {
            k.parse()
                .map(|i| (i, x))
                .map_err(|_| CliError::usage(format!("input {key:?}: bad variable index {k:?}")))
        })
        .collect()
}
