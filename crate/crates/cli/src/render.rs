use std::fmt::Write;

use serde_json::Value;

/// Indented `key: value` lines. Arrays of scalars stay on one line.
pub fn text(v: &Value) -> String {
    let mut out = String::new();
    block(&mut out, v, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::String(s) => Some(s.clone()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        Value::Array(items) => list(items).map(|s| format!("[{s}]")),
        Value::Object(_) => None,
    }
}

/// Inner arrays print as tuples.
fn list(items: &[Value]) -> Option<String> {
    let parts: Option<Vec<String>> = items
        .iter()
        .map(|i| match i {
            Value::Array(inner) => list(inner).map(|s| format!("({s})")),
            Value::Object(_) => None,
            _ => scalar(i),
        })
        .collect();
    parts.map(|p| p.join(", "))
}

fn block(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                match scalar(item) {
                    Some(s) => writeln!(out, "{pad}{k}: {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        block(out, item, indent + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => writeln!(out, "{pad}- {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}-").unwrap();
                        block(out, item, indent + 1);
                    }
                }
            }
        }
        _ => writeln!(out, "{pad}{}", scalar(v).unwrap_or_default()).unwrap(),
    }
}

#[cfg(test)]
mod tests {
    use serde_json::json;

    use super::*;

    #[test]
    fn nested_values() {
        let v = json!({ "a": [1, 2], "b": { "c": null }, "d": [{ "e": true }], "f": [["x", "y"]] });
        assert_eq!(text(&v), "a: [1, 2]\nb:\n  c: -\nd:\n  -\n    e: true\nf: [(x, y)]\n");
    }
}
