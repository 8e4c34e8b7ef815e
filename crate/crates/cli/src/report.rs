//! Reports: a canonical JSON body with CSV, markdown and plain-text
//! projections.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
    /// One line per row; the default for `verify`.
    Text,
}

/// A rectangular projection of a report.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str], rows: Vec<Vec<String>>) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows }
    }

    /// Parses simple comma-separated text with a header line.
    pub fn from_csv(text: &str) -> Self {
        let mut lines = text.lines();
        let headers = lines.next().map_or_else(Vec::new, |h| h.split(',').map(str::to_string).collect());
        let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
        Table { headers, rows }
    }

    pub fn is_empty(&self) -> bool {
        self.headers.is_empty()
    }

    /// Rows as JSON objects; numeric cells become numbers.
    pub fn to_records(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|row| {
                let obj = self
                    .headers
                    .iter()
                    .zip(row)
                    .map(|(h, c)| {
                        let v = c.parse::<i64>().map(Value::from).or_else(|_| c.parse::<f64>().map(Value::from));
                        (h.clone(), v.unwrap_or_else(|_| Value::from(c.as_str())))
                    })
                    .collect();
                Value::Object(obj)
            })
            .collect()
    }

    fn csv(&self) -> String {
        let mut out = self.headers.join(",") + "\n";
        for r in &self.rows {
            out += &r.join(",");
            out.push('\n');
        }
        out
    }

    fn markdown(&self) -> String {
        let mut out = format!("| {} |\n", self.headers.join(" | "));
        writeln!(out, "|{}", "---|".repeat(self.headers.len())).unwrap();
        for r in &self.rows {
            writeln!(out, "| {} |", r.join(" | ")).unwrap();
        }
        out
    }
}

/// Output of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub json: Value,
    pub table: Table,
    /// Plain-text lines, when the command has a natural line format.
    pub lines: Vec<String>,
    /// Set when the command ran but reports a failed check.
    pub failed: bool,
}

impl Report {
    pub fn new(json: Value, table: Table) -> Self {
        Report { json, table, lines: Vec::new(), failed: false }
    }

    /// Table used by the CSV and markdown projections: the command's own
    /// table, else the scalar top-level fields as `key,value`.
    fn projection(&self) -> Table {
        if !self.table.is_empty() {
            return self.table.clone();
        }
        let rows = match &self.json {
            Value::Object(map) => map
                .iter()
                .filter_map(|(k, v)| match v {
                    Value::String(s) => Some(vec![k.clone(), s.clone()]),
                    Value::Number(_) | Value::Bool(_) | Value::Null => Some(vec![k.clone(), v.to_string()]),
                    _ => None,
                })
                .collect(),
            _ => Vec::new(),
        };
        Table::new(&["key", "value"], rows)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("report serializes") + "\n",
            Format::Csv => self.projection().csv(),
            Format::Md => self.projection().markdown(),
            Format::Text if !self.lines.is_empty() => self.lines.iter().map(|l| format!("{l}\n")).collect(),
            Format::Text => self.projection().csv(),
        }
    }
}
