use serde::Serialize;
use serde_json::Value;

/// One machine-readable result: `{"op", "params", "value", "tolerance", "witness"}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub op: String,
    pub params: Value,
    pub value: Value,
    pub tolerance: Option<f64>,
    pub witness: Value,
}

impl Record {
    pub fn new(
        op: impl Into<String>,
        params: Value,
        value: Value,
        tolerance: Option<f64>,
        witness: Value,
    ) -> Self {
        Record {
            op: op.into(),
            params,
            value,
            tolerance,
            witness,
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("records serialize")
    }
}

/// JSON number, or `null` for non-finite values.
pub fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}
