//! Number formatting shared by every command: values are rounded to 15
//! significant digits before they are printed.

use serde_json::Value;

pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// Rounds every floating-point number inside a JSON value.
pub fn round_value(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .and_then(|x| serde_json::Number::from_f64(round_sig(x)))
            .map(Value::Number)
            .unwrap_or(Value::Null),
        Value::Array(items) => Value::Array(items.into_iter().map(round_value).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

pub fn to_json(value: Value) -> String {
    serde_json::to_string_pretty(&round_value(value)).expect("JSON values always serialize")
}

pub fn csv_number(x: f64) -> String {
    format!("{}", round_sig(x))
}
