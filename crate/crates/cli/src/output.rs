//! Rendering reports as JSON, CSV or text.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

use primepoly::report::Envelope;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Scalar leaves of a JSON value keyed by dotted paths. Arrays of scalars
/// and deeper arrays are kept as compact JSON text.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    walk("", value, &mut out);
    out
}

fn walk(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                walk(&key, v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// One CSV row per record; the header is the union of keys in first-seen
/// order.
pub fn to_csv(records: &[Value]) -> Result<String, csv::Error> {
    let rows: Vec<Vec<(String, String)>> = records.iter().map(flatten).collect();
    let mut header: Vec<String> = Vec::new();
    for row in &rows {
        for (k, _) in row {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for row in &rows {
        let cells: Vec<&str> = header
            .iter()
            .map(|h| row.iter().find(|(k, _)| k == h).map_or("", |(_, v)| v.as_str()))
            .collect();
        w.write_record(&cells)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn to_text(records: &[Value]) -> String {
    let mut out = String::new();
    for (i, r) in records.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for (k, v) in flatten(r) {
            out.push_str(&format!("{k}: {v}\n"));
        }
    }
    out
}

/// Serializes `body` in the chosen format. `rows` selects the records used
/// for CSV and text; JSON always carries the whole envelope.
pub fn render<T: Serialize>(command: &str, body: &T, rows: Option<&[Value]>, format: Format) -> Result<String, String> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&Envelope::new(command, body)).map_err(|e| err(&e))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv | Format::Text => {
            let whole = serde_json::to_value(body).map_err(|e| err(&e))?;
            let records: Vec<Value> = match rows {
                Some(r) => r.to_vec(),
                None => vec![whole],
            };
            if format == Format::Csv {
                to_csv(&records).map_err(|e| err(&e))
            } else {
                Ok(to_text(&records))
            }
        }
    }
}

/// Records from a serializable list.
pub fn records<T: Serialize>(items: &[T]) -> Vec<Value> {
    items.iter().map(|i| serde_json::to_value(i).unwrap_or(Value::Object(Map::new()))).collect()
}

/// Writes to the output path, or stdout when none is given.
pub fn emit(text: &str, path: Option<&std::path::Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}
