//! Indented plain-text rendering of JSON reports.

use std::fmt::Write;

use serde_json::Value;

pub fn render(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn inline(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    match v {
        Value::Array(items) => items
            .iter()
            .map(scalar)
            .collect::<Option<Vec<_>>>()
            .map(|xs| xs.join(" ")),
        Value::Object(map) if map.len() <= 3 => map
            .iter()
            .map(|(k, v)| scalar(v).map(|s| format!("{k}={s}")))
            .collect::<Option<Vec<_>>>()
            .map(|xs| format!("({})", xs.join(", "))),
        _ => None,
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
            for (k, v) in map {
                match inline(v) {
                    Some(s) => writeln!(out, "{pad}{k:width$}  {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        write_value(out, v, depth + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                match inline(item) {
                    Some(s) => writeln!(out, "{pad}[{i}] {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}[{i}]").unwrap();
                        write_value(out, item, depth + 1);
                    }
                }
            }
        }
        other => writeln!(out, "{pad}{}", scalar(other).unwrap_or_default()).unwrap(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flat_and_nested() {
        let text = render(&json!({
            "count": 3,
            "flags": [true, false],
            "checks": [{"name": "a", "pass": true}],
        }));
        assert!(text.contains("count   3"));
        assert!(text.contains("flags   true false"));
        assert!(text.contains("[0] (name=a, pass=true)"));
    }
}
