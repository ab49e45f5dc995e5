//! JSON polynomial documents.
//!
//! ```json
//! {"nvars": 2, "mode": "exact", "terms": [{"exp": {"1": 2, "2": 1}, "c": ["5/1", "0/1"]}]}
//! ```
//!
//! `mode` is optional when reading: string parts mean exact, numbers float.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use super::{Monomial, SparseMultiPoly};
use crate::arith::json::{exact_pair, float_pair, parse_exact_pair, parse_float_pair};
use crate::arith::{QComplex, ScalarMode};
use crate::error::{Error, Result};

/// A polynomial whose scalar mode is decided at runtime.
#[derive(Clone, Debug, PartialEq)]
pub enum DynPoly {
    Exact(SparseMultiPoly<QComplex>),
    Float(SparseMultiPoly<Complex64>),
}

impl DynPoly {
    pub fn mode(&self) -> ScalarMode {
        match self {
            DynPoly::Exact(_) => ScalarMode::Exact,
            DynPoly::Float(_) => ScalarMode::Float,
        }
    }

    pub fn to_float(&self) -> SparseMultiPoly<Complex64> {
        match self {
            DynPoly::Exact(p) => p.to_float(),
            DynPoly::Float(p) => p.clone(),
        }
    }
}

fn exp_object(m: &Monomial) -> Value {
    let mut obj = Map::new();
    for &(v, e) in m.entries() {
        obj.insert(v.to_string(), Value::from(e));
    }
    Value::Object(obj)
}

pub fn poly_to_json(p: &DynPoly) -> Value {
    let (nvars, terms): (usize, Vec<Value>) = match p {
        DynPoly::Exact(p) => (
            p.nvars(),
            p.terms()
                .map(|(m, c)| json!({"exp": exp_object(m), "c": exact_pair(c)}))
                .collect(),
        ),
        DynPoly::Float(p) => (
            p.nvars(),
            p.terms()
                .map(|(m, c)| json!({"exp": exp_object(m), "c": float_pair(c)}))
                .collect(),
        ),
    };
    json!({"nvars": nvars, "mode": p.mode(), "terms": terms})
}

pub fn poly_from_json(value: &Value) -> Result<DynPoly> {
    let nvars = value
        .get("nvars")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("polynomial document needs an integer \"nvars\"".into()))?
        as usize;
    let terms = value
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("polynomial document needs a \"terms\" array".into()))?;
    let mode = match value.get("mode") {
        Some(m) => serde_json::from_value(m.clone())
            .map_err(|e| Error::Parse(format!("polynomial mode: {e}")))?,
        None => {
            let stringy = terms
                .iter()
                .filter_map(|t| t.get("c").and_then(|c| c.get(0)))
                .any(Value::is_string);
            if stringy {
                ScalarMode::Exact
            } else {
                ScalarMode::Float
            }
        }
    };
    let mut parsed = Vec::with_capacity(terms.len());
    for t in terms {
        let exp = t
            .get("exp")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse(format!("term needs an \"exp\" object: {t}")))?;
        let mut pairs = Vec::with_capacity(exp.len());
        for (k, e) in exp {
            let var: usize = k
                .parse()
                .map_err(|_| Error::Parse(format!("variable key {k:?} is not an index")))?;
            let e = e
                .as_u64()
                .and_then(|e| u32::try_from(e).ok())
                .ok_or_else(|| {
                    Error::Parse(format!("exponent of x{var} must be a small integer"))
                })?;
            pairs.push((var, e));
        }
        let c = t
            .get("c")
            .ok_or_else(|| Error::Parse(format!("term needs a \"c\" pair: {t}")))?;
        parsed.push((Monomial::from_pairs(pairs)?, c));
    }
    Ok(match mode {
        ScalarMode::Exact => DynPoly::Exact(SparseMultiPoly::from_terms(
            nvars,
            parsed
                .into_iter()
                .map(|(m, c)| Ok((m, parse_exact_pair(c)?)))
                .collect::<Result<Vec<_>>>()?,
        )?),
        ScalarMode::Float => DynPoly::Float(SparseMultiPoly::from_terms(
            nvars,
            parsed
                .into_iter()
                .map(|(m, c)| Ok((m, parse_float_pair(c)?)))
                .collect::<Result<Vec<_>>>()?,
        )?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bohr::exact_poly;

    #[test]
    fn round_trip() {
        let p = DynPoly::Exact(exact_poly(3, &[(&[], 1), (&[(1, 2), (3, 1)], -4)]).unwrap());
        let v = poly_to_json(&p);
        assert_eq!(
            v.to_string(),
            r#"{"nvars":3,"mode":"exact","terms":[{"exp":{},"c":["1/1","0/1"]},{"exp":{"1":2,"3":1},"c":["-4/1","0/1"]}]}"#
        );
        assert_eq!(poly_from_json(&v).unwrap(), p);
        let f = DynPoly::Float(p.to_float());
        assert_eq!(poly_from_json(&poly_to_json(&f)).unwrap(), f);
    }

    #[test]
    fn mode_is_inferred() {
        let v = json!({"nvars": 2, "terms": [{"exp": {"2": 1}, "c": [0.5, -1.0]}]});
        assert_eq!(poly_from_json(&v).unwrap().mode(), ScalarMode::Float);
        let bad = json!({"nvars": 1, "terms": [{"exp": {"2": 1}, "c": [0.5, -1.0]}]});
        assert!(poly_from_json(&bad).is_err());
    }
}
