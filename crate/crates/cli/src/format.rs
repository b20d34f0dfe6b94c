//! Output formats and number rendering. Every number leaves the program rounded to
//! 12 significant digits.

use clap::ValueEnum;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// JSON number rounded to 12 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    let r = round12(x);
    serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// Text form: plain decimal for moderate magnitudes, exponent form otherwise.
pub fn text(x: f64) -> String {
    let r = round12(x);
    if r == 0.0 {
        "0".into()
    } else if !r.is_finite() || (1e-4..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

pub fn opt_text(x: Option<f64>) -> String {
    x.map_or_else(String::new, text)
}

/// Wraps a JSON object with the schema version and command name.
pub fn document(command: &str, mut body: serde_json::Map<String, Value>) -> Value {
    body.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    body.insert("command".into(), Value::from(command));
    Value::Object(body)
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round12(0.1 + 0.2), 0.3);
        assert_eq!(round12(9.998366483134082e-4), 9.99836648313e-4);
        assert_eq!(round12(-1.0 / 3.0), -0.333333333333);
        assert!(round12(f64::NAN).is_nan());
    }

    #[test]
    fn text_forms() {
        assert_eq!(text(0.0), "0");
        assert_eq!(text(4e-5), "4e-5");
        assert_eq!(text(0.75), "0.75");
        assert_eq!(text(4.844805262605389), "4.84480526261");
        assert_eq!(text(1e20), "1e20");
        assert_eq!(num(f64::INFINITY), Value::Null);
    }
}
