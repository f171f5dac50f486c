//! JSON output with every float written as a 17-significant-digit decimal.
//!
//! 17 digits are enough to round-trip any `f64`, and a fixed width makes the
//! text itself stable: serializing a parsed document reproduces it byte for
//! byte. Arrays of scalars (matrix rows, label lists) stay on one line.

use serde::Serialize;
use serde_json::Value;

/// `value` with 17 significant digits in scientific notation.
pub fn format_f64(value: f64) -> String {
    format!("{value:.16e}")
}

fn scalar(out: &mut String, v: &Value) {
    match v {
        Value::Number(n) if n.is_f64() => match n.as_f64() {
            Some(f) if f.is_finite() => out.push_str(&format_f64(f)),
            _ => out.push_str("null"),
        },
        other => out.push_str(&other.to_string()),
    }
}

fn is_container(v: &Value) -> bool {
    matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if !items.iter().any(is_container) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                scalar(out, item);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                out.push_str(if k > 0 { ",\n" } else { "\n" });
                pad(out, depth + 1);
                write_value(out, item, depth + 1);
            }
            out.push('\n');
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push('{');
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(if k > 0 { ",\n" } else { "\n" });
                pad(out, depth + 1);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push_str(": ");
                write_value(out, item, depth + 1);
            }
            out.push('\n');
            pad(out, depth);
            out.push('}');
        }
        other => scalar(out, other),
    }
}

/// Canonical JSON text for `value`, newline-terminated.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let tree = serde_json::to_value(value).expect("document is representable as JSON");
    let mut out = String::new();
    write_value(&mut out, &tree, 0);
    out.push('\n');
    out
}
