// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

//! Rectangular result tables and their serialisations.
//!
//! CSV carries the metadata as leading `# key: <json>` lines, then a header
//! and one record per row; reals are written with 17 significant digits.
//! The whitespace variant is the same content, space-separated, for gnuplot.
//! JSON is `{"metadata": {...}, "columns": [...], "rows": [{...}, ...]}`.

use std::io::Write;

use serde_json::{json, Map, Number, Value};

use crate::config::Format;
use crate::error::{CliError, CliResult};

/// Bumped whenever a column is added, removed, renamed or reordered.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    /// Undefined at this row (e.g. a width at `T = 0`).
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

/// 17 significant digits, round-trip exact.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

/// JSON number, or the [`format_real`] spelling for non-finite values.
pub fn real_json(x: f64) -> Value {
    Number::from_f64(x).map_or_else(|| Value::String(format_real(x)), Value::Number)
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Num(x) => format_real(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => real_json(*x),
            Cell::Int(n) => json!(n),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
            Cell::Missing => Value::Null,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(n) => Some(*n as f64),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: Map<String, Value>,
}

impl ResultTable {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.as_ref().to_string()).collect(),
            rows: Vec::new(),
            metadata: Map::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) {
        self.metadata.insert(key.to_string(), value.into());
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric contents of a column; `None` for non-numeric cells.
    pub fn numbers(&self, name: &str) -> Vec<Option<f64>> {
        let j = self.column(name).unwrap_or_else(|| panic!("no column `{name}`"));
        self.rows.iter().map(|r| r[j].as_f64()).collect()
    }

    pub fn render(&self, format: Format, whitespace: bool) -> CliResult<Vec<u8>> {
        let mut out = Vec::new();
        match (format, whitespace) {
            (Format::Csv, false) => self.write_csv(&mut out)?,
            (Format::Csv, true) => self.write_whitespace(&mut out)?,
            (Format::Json, _) => self.write_json(&mut out)?,
        }
        Ok(out)
    }

    fn write_metadata_comments<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        for (k, v) in &self.metadata {
            writeln!(w, "# {k}: {v}")?;
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> CliResult<()> {
        self.write_metadata_comments(&mut w).map_err(io("writing csv metadata"))?;
        let mut wr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        let err = |e: csv::Error| CliError::config(format!("writing csv: {e}"));
        wr.write_record(&self.columns).map_err(err)?;
        for row in &self.rows {
            wr.write_record(row.iter().map(Cell::text)).map_err(err)?;
        }
        wr.flush().map_err(io("flushing csv"))?;
        Ok(())
    }

    pub fn write_whitespace<W: Write>(&self, mut w: W) -> CliResult<()> {
        let mut body = || -> std::io::Result<()> {
            self.write_metadata_comments(&mut w)?;
            writeln!(w, "# {}", self.columns.join(" "))?;
            for row in &self.rows {
                let cells: Vec<String> = row
                    .iter()
                    .map(|c| match c {
                        Cell::Missing => "?".to_string(),
                        Cell::Text(s) => format!("\"{}\"", s.replace('"', "'")),
                        other => other.text(),
                    })
                    .collect();
                writeln!(w, "{}", cells.join(" "))?;
            }
            Ok(())
        };
        body().map_err(io("writing whitespace table"))
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> =
                    self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect();
                Value::Object(obj)
            })
            .collect();
        json!({
            "metadata": Value::Object(self.metadata.clone()),
            "columns": self.columns,
            "rows": rows,
        })
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> CliResult<()> {
        serde_json::to_writer_pretty(&mut w, &self.to_json())
            .map_err(|e| CliError::config(format!("writing json: {e}")))?;
        writeln!(w).map_err(io("writing json"))
    }
}

fn io(context: &'static str) -> impl Fn(std::io::Error) -> CliError {
    move |source| CliError::Io { context: context.into(), source }
}
