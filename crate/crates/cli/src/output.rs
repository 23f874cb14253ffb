//! Report printing. Floats are cut to nine significant digits so that
//! reports stay byte-stable well above the solver tolerance.

use std::io::Write;

use serde_json::{Number, Value};

pub const SIGNIFICANT_DIGITS: usize = 9;

pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        // also folds -0.0 into 0.0
        return if x.is_finite() { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses")
}

pub fn rounded(v: &Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().expect("f64 number"));
            Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.iter().map(rounded).collect()),
        Value::Object(map) => Value::Object(map.iter().map(|(k, v)| (k.clone(), rounded(v))).collect()),
        other => other.clone(),
    }
}

pub fn emit(report: &Value) {
    let text = serde_json::to_string_pretty(&rounded(report)).expect("JSON values print");
    // a closed pipe downstream is not worth a panic
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}
