//! Output records and their CSV/JSON renderings.

use std::io::Write;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::settings::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub version: String,
    pub config_hash: String,
    pub config: Vec<(String, String)>,
}

impl Provenance {
    /// Hash over the command name and the effective entries, in order.
    pub fn new(command: &str, config: Vec<(String, String)>) -> Self {
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        for (k, v) in &config {
            h.update(b"\n");
            h.update(k.as_bytes());
            h.update(b"=");
            h.update(v.as_bytes());
        }
        let hex: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
        Provenance {
            version: cavity_core::VERSION.to_string(),
            config_hash: format!("sha256:{hex}"),
            config,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub command: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(String, Cell)>,
    pub notices: Vec<String>,
    pub provenance: Provenance,
}

impl OutputRecord {
    pub fn new(command: &str, columns: &[&str], provenance: Provenance) -> Self {
        OutputRecord {
            command: command.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
            notices: Vec::new(),
            provenance,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the column schema"
        );
        self.rows.push(row);
    }

    pub fn summarize(&mut self, key: &str, value: impl Into<Cell>) {
        self.summary.push((key.to_string(), value.into()));
    }

    pub fn write<W: Write>(
        &self,
        out: &mut W,
        format: Format,
        digits: usize,
    ) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out, digits),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json(digits))?;
                writeln!(out)
            }
        }
    }

    fn write_csv<W: Write>(&self, out: &mut W, digits: usize) -> std::io::Result<()> {
        writeln!(out, "# command: {}", self.command)?;
        writeln!(out, "# version: {}", self.provenance.version)?;
        writeln!(out, "# config_hash: {}", self.provenance.config_hash)?;
        for (k, v) in &self.provenance.config {
            writeln!(out, "# config.{k}: {v}")?;
        }
        for (k, v) in &self.summary {
            writeln!(out, "# summary.{k}: {}", csv_cell(v, digits))?;
        }
        for n in &self.notices {
            writeln!(out, "# notice: {n}")?;
        }
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_cell(c, digits)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_json(&self, digits: usize) -> Value {
        let config: Map<String, Value> = self
            .provenance
            .config
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let summary: Map<String, Value> = self
            .summary
            .iter()
            .map(|(k, v)| (k.clone(), json_cell(v, digits)))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|c| json_cell(c, digits)).collect()))
            .collect();
        json!({
            "command": self.command,
            "provenance": {
                "version": self.provenance.version,
                "config_hash": self.provenance.config_hash,
                "config": config,
            },
            "columns": self.columns,
            "rows": rows,
            "summary": summary,
            "notices": self.notices,
        })
    }
}

/// Scientific notation with `digits` significant digits.
pub fn format_number(x: f64, digits: usize) -> String {
    if x.is_finite() {
        format!("{:.*e}", digits.saturating_sub(1), x)
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn csv_cell(c: &Cell, digits: usize) -> String {
    match c {
        Cell::Num(x) => format_number(*x, digits),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) => s.clone(),
    }
}

fn json_cell(c: &Cell, digits: usize) -> Value {
    match c {
        Cell::Num(x) => {
            let rounded: f64 = format_number(*x, digits).parse().unwrap_or(*x);
            serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
        }
        Cell::Int(i) => Value::from(*i),
        Cell::Text(s) => Value::String(s.clone()),
    }
}
