//! Rendering of command results as JSON or CSV, each prefixed by metadata
//! echoing the invocation.

use std::fmt::Write as _;

use fracseries::FracSeries;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::Format;

/// Decimal rendering shared by both formats: shortest round-trip form.
pub fn num(x: f64) -> String {
    serde_json::to_string(&x).expect("f64 always serializes")
}

/// A CSV table.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn series(series: &FracSeries) -> Self {
        Table {
            header: vec!["m", "n", "exponent", "coefficient"],
            rows: series
                .terms()
                .into_iter()
                .map(|t| {
                    vec![
                        t.key.m.to_string(),
                        t.key.n.to_string(),
                        num(t.exponent),
                        num(t.coefficient),
                    ]
                })
                .collect(),
        }
    }
}

/// The result of one command.
#[derive(Debug, Clone)]
pub struct Output {
    /// Top-level JSON fields next to `meta`.
    pub body: Map<String, Value>,
    /// Main CSV table; scalar fields of `body` not shown in it become comments.
    pub table: Table,
    /// Keys of `body` rendered by `table` and therefore left out of CSV comments.
    pub tabulated: Vec<&'static str>,
    /// True when a verification check failed.
    pub failed: bool,
}

impl Output {
    pub fn new(table: Table) -> Self {
        Output {
            body: Map::new(),
            table,
            tabulated: Vec::new(),
            failed: false,
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.body.insert(
            key.to_string(),
            serde_json::to_value(value).expect("command outputs serialize"),
        );
        self
    }

    /// Adds `value` under `key` and marks it as the content of the CSV table.
    pub fn tabulating(mut self, key: &'static str, value: impl Serialize) -> Self {
        self.tabulated.push(key);
        self.with(key, value)
    }

    pub fn render(&self, format: Format, meta: &Value) -> String {
        match format {
            Format::Json => {
                let mut doc = Map::new();
                doc.insert("meta".into(), meta.clone());
                doc.extend(self.body.clone());
                let mut text = serde_json::to_string_pretty(&Value::Object(doc))
                    .expect("JSON values serialize");
                text.push('\n');
                text
            }
            Format::Csv => {
                let mut text = String::new();
                for (key, value) in meta.as_object().into_iter().flatten() {
                    writeln!(text, "# {key}: {}", compact(value)).unwrap();
                }
                for (key, value) in &self.body {
                    if !self.tabulated.contains(&key.as_str()) {
                        writeln!(text, "# {key}: {}", compact(value)).unwrap();
                    }
                }
                writeln!(text, "{}", self.table.header.join(",")).unwrap();
                for row in &self.table.rows {
                    writeln!(text, "{}", row.join(",")).unwrap();
                }
                text
            }
        }
    }
}

fn compact(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `{"tool": "frac", "version": …, "command": …, "params": …}`.
pub fn meta(command: &str, params: Value) -> Value {
    json!({
        "tool": "frac",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "params": params,
    })
}
