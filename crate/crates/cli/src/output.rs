use std::fmt::Write;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut out = String::new();
            write_json(&mut out, v, 0);
            out
        }
        Format::Text => render_text(v),
    }
}

/// Floats with 17 significant digits, so they round-trip exactly.
fn number(n: &serde_json::Number) -> String {
    if n.is_f64() {
        let x = n.as_f64().unwrap();
        format!("{x:.16e}")
    } else {
        n.to_string()
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(number(n)),
        Value::String(s) => Some(serde_json::to_string(s).unwrap()),
        _ => None,
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| scalar(x).is_some()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn write_json(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent + 1);
    let close = "  ".repeat(indent);
    match v {
        Value::Array(xs) if xs.is_empty() => out.push_str("[]"),
        Value::Array(xs) if is_flat(v) => {
            let items: Vec<String> = xs.iter().map(|x| scalar(x).unwrap()).collect();
            let _ = write!(out, "[{}]", items.join(", "));
        }
        Value::Array(xs) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad);
                write_json(out, x, indent + 1);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{close}]");
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                let _ = write!(out, "{pad}{}: ", serde_json::to_string(k).unwrap());
                write_json(out, x, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{close}}}");
        }
        other => out.push_str(&scalar(other).unwrap()),
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => number(n),
        Value::Array(xs) => format!("({})", xs.iter().map(text_value).collect::<Vec<_>>().join(", ")),
        Value::Object(map) => map
            .iter()
            .map(|(k, x)| format!("{k}={}", text_value(x)))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}

fn render_text(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, x)| format!("{k}: {}", text_value(x)))
            .collect::<Vec<_>>()
            .join("\n"),
        other => text_value(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_carry_seventeen_digits() {
        let v = json!({"a": 0.1, "b": [1, "1/2"], "c": {"d": true}});
        let s = render(&v, Format::Json);
        assert!(s.contains("\"a\": 1.0000000000000001e-1"));
        assert!(s.contains("\"b\": [1, \"1/2\"]"));
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["a"].as_f64(), Some(0.1));
        assert_eq!(render(&v, Format::Text), "a: 1.0000000000000001e-1\nb: (1, 1/2)\nc: d=true");
    }
}
