//! Plain-text rendering of a JSON report. The text form carries the same data as the JSON.

use std::fmt::Write;

use serde_json::Value;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// Short arrays and maps of scalars fit on one line.
fn inline(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    let parts: Option<Vec<String>> = match v {
        Value::Array(xs) => xs.iter().map(inline).collect(),
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| scalar(v).map(|s| format!("{k}: {s}")))
            .collect(),
        _ => None,
    };
    let parts = parts?;
    let line = parts.join(", ");
    if line.len() > 100 {
        return None;
    }
    Some(match v {
        Value::Array(_) => format!("[{line}]"),
        _ => format!("{{{line}}}"),
    })
}

fn walk(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = inline(v) {
        let _ = writeln!(out, "{pad}{key}: {s}");
        return;
    }
    let _ = writeln!(out, "{pad}{key}:");
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                walk(out, k, x, depth + 1);
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                walk(out, &format!("- {i}"), x, depth + 1);
            }
        }
        _ => unreachable!("scalars render inline"),
    }
}

pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                walk(&mut out, k, x, 0);
            }
        }
        other => walk(&mut out, "report", other, 0),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn nested_rendering() {
        let v = json!({
            "p": 1,
            "eta_L": {"[1,3,3,1,5]": "1/3", "[4,2,2,4,5]": "2/3"},
            "checks": [{"name": "a", "pass": true}],
            "empty": null
        });
        let text = to_text(&v);
        assert!(text.contains("p: 1\n"));
        assert!(text.contains("eta_L: {[1,3,3,1,5]: 1/3, [4,2,2,4,5]: 2/3}"));
        assert!(text.contains("checks: [{name: a, pass: true}]"));
        assert!(text.contains("empty: -"));
    }

    #[test]
    fn long_lists_break_over_lines() {
        let v = json!({"xs": (0..60).collect::<Vec<_>>()});
        let text = to_text(&v);
        assert!(text.starts_with("xs:\n"));
        assert!(text.contains("  - 59: 59"));
    }
}
