//! Output formatting: frozen CSV column orders and float serialization.

use serde_json::{json, Value};

/// 17 significant digits, so reruns are diffable and round-trip exactly.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// JSON value for a float that may be infinite (JSON numbers cannot be).
pub fn json_value(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(fmt17(x))
    }
}

/// Scale factor applied to logarithmic (bit-valued) outputs: `ln 2` turns
/// bits into nats when `--base e` is selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogBase {
    Two,
    E,
}

impl LogBase {
    pub fn factor(self) -> f64 {
        match self {
            LogBase::Two => 1.0,
            LogBase::E => std::f64::consts::LN_2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LogBase::Two => "2",
            LogBase::E => "e",
        }
    }
}

/// One CSV row: fields joined by commas, no quoting (the surface never emits
/// commas inside fields).
pub fn csv_row(fields: &[String]) -> String {
    fields.join(",")
}
