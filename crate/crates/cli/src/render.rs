//! Plain-text rendering of a JSON report.
//!
//! Tables are drawn from the exact value that `--format json` prints, so the
//! two formats cannot disagree on a number.

use serde_json::{Map, Value};

pub fn table(value: &Value) -> String {
    let mut out = String::new();
    match value {
        Value::Object(map) => object(map, 0, &mut out),
        other => {
            out.push_str(&scalar(other));
            out.push('\n');
        }
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            if items.is_empty() {
                "(none)".into()
            } else {
                items.iter().map(scalar).collect::<Vec<_>>().join(", ")
            }
        }
        other => other.to_string(),
    }
}

fn is_record_list(v: &Value) -> bool {
    matches!(v, Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object))
}

fn object(map: &Map<String, Value>, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
    for (key, v) in map {
        match v {
            Value::Object(inner) => {
                out.push_str(&format!("{pad}{key}:\n"));
                object(inner, indent + 2, out);
            }
            Value::Array(items) if is_record_list(v) => {
                out.push_str(&format!("{pad}{key}:\n"));
                records(items, indent + 2, out);
            }
            _ => out.push_str(&format!("{pad}{key:<width$}  {}\n", scalar(v))),
        }
    }
}

fn records(items: &[Value], indent: usize, out: &mut String) {
    let mut columns: Vec<&str> = Vec::new();
    for item in items {
        for key in item.as_object().into_iter().flat_map(Map::keys) {
            if !columns.contains(&key.as_str()) {
                columns.push(key);
            }
        }
    }
    let rows: Vec<Vec<String>> = items
        .iter()
        .map(|item| {
            columns
                .iter()
                .map(|c| match item.get(*c) {
                    Some(Value::Array(xs)) if xs.iter().all(Value::is_string) => {
                        xs.iter().map(scalar).collect::<Vec<_>>().join("; ")
                    }
                    Some(v) => scalar(v),
                    None => "-".into(),
                })
                .collect()
        })
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| {
            rows.iter()
                .map(|r| r[i].chars().count())
                .chain([c.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let pad = " ".repeat(indent);
    let line = |cells: Vec<&str>| {
        let joined: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("{pad}{}\n", joined.join("  ").trim_end())
    };
    out.push_str(&line(columns.clone()));
    for row in &rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
}
