//! Flat key/value rendering with 12 significant digits.

use irreality_core::experiments::fmt_sig;

use crate::Format;

pub enum Value {
    Num(Option<f64>),
    Text(String),
    Bool(bool),
}

impl Value {
    fn json(&self) -> String {
        match self {
            Value::Num(Some(x)) if x.is_finite() => fmt_sig(*x),
            Value::Num(_) => "null".into(),
            Value::Text(s) => quote(s),
            Value::Bool(b) => b.to_string(),
        }
    }

    fn csv(&self) -> String {
        match self {
            Value::Num(Some(x)) => fmt_sig(*x),
            Value::Num(None) => String::new(),
            Value::Text(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Value::Text(s) => s.clone(),
            Value::Bool(b) => b.to_string(),
        }
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

pub fn object(pairs: &[(String, Value)]) -> String {
    let body: Vec<String> = pairs
        .iter()
        .map(|(k, v)| format!("  {}: {}", quote(k), v.json()))
        .collect();
    format!("{{\n{}\n}}", body.join(",\n"))
}

/// Header line and one value line.
pub fn csv_row(pairs: &[(String, Value)]) -> String {
    let keys: Vec<&str> = pairs.iter().map(|(k, _)| k.as_str()).collect();
    let vals: Vec<String> = pairs.iter().map(|(_, v)| v.csv()).collect();
    format!("{}\n{}", keys.join(","), vals.join(","))
}

pub fn flat(pairs: &[(String, Value)], format: Format) -> String {
    match format {
        Format::Json => object(pairs),
        Format::Csv => csv_row(pairs),
    }
}
