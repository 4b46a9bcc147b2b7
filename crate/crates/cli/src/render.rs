//! Text and JSON renderings of a command's output document.

use std::fmt::Write;

use serde_json::Value;
use theta_units_core::BigReal;

/// Significant decimal digits trusted at `prec` bits (32 guard bits dropped).
pub fn digits(prec: u32) -> usize {
    ((prec.saturating_sub(32) as f64) * std::f64::consts::LOG10_2)
        .floor()
        .max(1.0) as usize
}

/// A decimal string carrying [`digits`]`(prec)` significant digits.
pub fn decimal(x: &BigReal, prec: u32) -> Value {
    Value::String(x.to_decimal_string(digits(prec)))
}

/// A residual or error size in short scientific form.
pub fn sci(x: &BigReal) -> Value {
    Value::String(x.to_sci_string(4))
}

pub fn json(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("a Value always serializes");
    s.push('\n');
    s
}

/// `key: value` lines, nested objects indented by two spaces.
pub fn text(doc: &Value) -> String {
    let mut out = String::new();
    match doc {
        Value::Object(_) => write_value(&mut out, doc, 0),
        other => {
            let _ = writeln!(out, "{}", scalar(other));
        }
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) => {
            let parts: Vec<_> = items.iter().map(scalar).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(items) => items.iter().all(|i| !i.is_object() && !i.is_array()),
        _ => true,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                if is_flat(v) {
                    let _ = writeln!(out, "{pad}{k}: {}", scalar(v));
                } else {
                    let _ = writeln!(out, "{pad}{k}:");
                    write_value(out, v, indent + 2);
                }
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                if is_flat(item) {
                    let _ = writeln!(out, "{pad}- {}", scalar(item));
                } else {
                    let _ = writeln!(out, "{pad}[{i}]");
                    write_value(out, item, indent + 2);
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_layout() {
        let doc = json!({"b": {"x": 1, "y": [1, 2]}, "a": "s", "rows": [{"k": null}]});
        assert_eq!(
            text(&doc),
            "a: s\nb:\n  x: 1\n  y: [1, 2]\nrows:\n  [0]\n    k: -\n"
        );
    }

    #[test]
    fn digit_budget() {
        assert_eq!(digits(256), 67);
        assert_eq!(digits(32), 1);
    }
}
