//! Output formats. JSON is the reference encoding; CSV and text are derived
//! from the same value by flattening nested keys into dotted column names.

use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("values always serialize");
            s.push('\n');
            s
        }
        Format::Csv => csv_table(value),
        Format::Text => text(value),
    }
}

/// One flattened record per row: a top-level array gives one row per
/// element, anything else a single row.
pub fn rows(value: &Value) -> Vec<Vec<(String, String)>> {
    match value {
        Value::Array(items) => items.iter().map(flatten).collect(),
        v => vec![flatten(v)],
    }
}

pub fn flatten(value: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(map) if !map.is_empty() => {
                for (k, x) in map {
                    walk(&key(k), x, out);
                }
            }
            Value::Array(items) if !items.is_empty() => {
                for (i, x) in items.iter().enumerate() {
                    walk(&key(&i.to_string()), x, out);
                }
            }
            leaf => out.push((if prefix.is_empty() { "value".into() } else { prefix.to_string() }, scalar(leaf))),
        }
    }
    let mut out = Vec::new();
    walk("", value, &mut out);
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Column names in order of first appearance across all rows.
pub fn header(rows: &[Vec<(String, String)>]) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for row in rows {
        for (k, _) in row {
            if seen.insert(k.clone()) {
                cols.push(k.clone());
            }
        }
    }
    cols
}

fn aligned(rows: &[Vec<(String, String)>], cols: &[String]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|row| {
            cols.iter()
                .map(|c| row.iter().find(|(k, _)| k == c).map(|(_, v)| v.clone()).unwrap_or_default())
                .collect()
        })
        .collect()
}

fn csv_table(value: &Value) -> String {
    let rows = rows(value);
    if matches!(value, Value::Array(a) if a.is_empty()) {
        return String::new();
    }
    let cols = header(&rows);
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(&cols).expect("in-memory write");
    for r in aligned(&rows, &cols) {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn text(value: &Value) -> String {
    let mut out = String::new();
    match value {
        Value::Array(items) if items.is_empty() => out.push_str("(no rows)\n"),
        Value::Array(_) => {
            let rows = rows(value);
            let cols = header(&rows);
            let cells = aligned(&rows, &cols);
            let widths: Vec<usize> = cols
                .iter()
                .enumerate()
                .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
                .collect();
            let line = |vals: &[String]| {
                let padded: Vec<String> = vals.iter().zip(&widths).map(|(v, w)| format!("{v:<w$}")).collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            out.push_str(&line(&cols));
            for r in &cells {
                out.push_str(&line(r));
            }
        }
        v => {
            for (k, val) in flatten(v) {
                if val.contains('\n') {
                    out.push_str(&format!("{k}:\n{val}"));
                    if !val.ends_with('\n') {
                        out.push('\n');
                    }
                } else {
                    out.push_str(&format!("{k}: {val}\n"));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattening_uses_dotted_keys() {
        let v = json!({"n": 18, "evidence": {"witnesses": ["bQ7Q1u"], "k": 2}, "note": null});
        let f = flatten(&v);
        assert_eq!(
            f,
            vec![
                ("n".into(), "18".into()),
                ("evidence.witnesses.0".into(), "bQ7Q1u".into()),
                ("evidence.k".into(), "2".into()),
                ("note".into(), String::new()),
            ]
        );
    }

    #[test]
    fn csv_fills_missing_columns() {
        let v = json!([{"a": 1}, {"a": 2, "b": "x,y"}]);
        assert_eq!(render(&v, Format::Csv), "a,b\n1,\n2,\"x,y\"\n");
    }

    #[test]
    fn text_tables_are_aligned() {
        let v = json!([{"degree": 0, "group": "0"}, {"degree": 10, "group": "Z^6"}]);
        assert_eq!(render(&v, Format::Text), "degree  group\n0       0\n10      Z^6\n");
    }
}
