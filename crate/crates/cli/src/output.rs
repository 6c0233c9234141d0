//! Rendering command results as JSON, CSV or text.
//!
//! Every command builds a JSON value whose numbers are all strings; CSV and
//! text are derived from it. Commands with a natural table (spectra, levels)
//! also supply rows for CSV.

use serde_json::Value;

use crate::config::OutputFormat;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
    CapExceeded,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailed => 1,
            Status::CapExceeded => 3,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Payload {
    Data {
        value: Value,
        table: Option<Table>,
    },
    /// Written as is, whatever the format (SVG).
    Raw(String),
}

#[derive(Clone, Debug)]
pub struct Output {
    pub payload: Payload,
    pub status: Status,
}

impl Output {
    pub fn data(value: Value) -> Self {
        Self {
            payload: Payload::Data { value, table: None },
            status: Status::Ok,
        }
    }

    pub fn with_table(mut self, t: Table) -> Self {
        if let Payload::Data { table, .. } = &mut self.payload {
            *table = Some(t);
        }
        self
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn raw(text: String) -> Self {
        Self {
            payload: Payload::Raw(text),
            status: Status::Ok,
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match &self.payload {
            Payload::Raw(text) => text.clone(),
            Payload::Data { value, table } => match format {
                OutputFormat::Json => format!("{value}\n"),
                OutputFormat::Csv => match table {
                    Some(t) => csv(t),
                    None => {
                        let mut t = Table::new(&["key", "value"]);
                        for (k, v) in flatten(value) {
                            t.push(vec![k, v]);
                        }
                        csv(&t)
                    }
                },
                OutputFormat::Text => flatten(value)
                    .into_iter()
                    .map(|(k, v)| format!("{k}: {v}\n"))
                    .collect(),
            },
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv(t: &Table) -> String {
    let line = |cells: &[String]| {
        let mut s = cells
            .iter()
            .map(|c| csv_field(c))
            .collect::<Vec<_>>()
            .join(",");
        s.push('\n');
        s
    };
    let mut out = line(&t.header);
    for r in &t.rows {
        out.push_str(&line(r));
    }
    out
}

/// Dotted paths to every scalar leaf, in key order.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    fn go(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(map) => {
                for (k, v) in map {
                    go(&join(k), v, out);
                }
            }
            Value::Array(items) => {
                for (i, v) in items.iter().enumerate() {
                    go(&join(&i.to_string()), v, out);
                }
            }
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            Value::Null => out.push((prefix.to_string(), String::new())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    go("", value, &mut out);
    out
}
