//! Flat result tables and their CSV/JSON encodings.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Bumped whenever a JSON layout changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Null,
    Num(f64),
    Text(String),
}

impl Cell {
    /// Non-finite values become `Null` so that JSON can carry them.
    pub fn num(x: f64) -> Cell {
        if x.is_finite() {
            Cell::Num(x)
        } else {
            Cell::Null
        }
    }

    pub fn opt(x: Option<f64>) -> Cell {
        x.map_or(Cell::Null, Cell::num)
    }

    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    pub fn flag(b: bool) -> Cell {
        Cell::Num(if b { 1.0 } else { 0.0 })
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            _ => None,
        }
    }

    fn to_field(&self) -> String {
        match self {
            Cell::Null => String::new(),
            Cell::Num(x) => format_number(*x),
            Cell::Text(s) => s.clone(),
        }
    }

    fn from_field(s: &str) -> Cell {
        if s.is_empty() {
            Cell::Null
        } else if let Ok(x) = s.parse::<f64>() {
            Cell::Num(x)
        } else {
            Cell::Text(s.to_string())
        }
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_number(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x:?}")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Two-column `quantity,value` table.
    pub fn key_values(pairs: Vec<(&str, Cell)>) -> Self {
        let mut t = Table::new(&["quantity", "value"]);
        for (k, v) in pairs {
            t.push(vec![Cell::text(k), v]);
        }
        t
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn write_csv(&self, w: impl Write) -> CliResult<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Cell::to_field))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> CliResult<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn read_csv(r: impl Read) -> CliResult<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let columns = rdr.headers()?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            rows.push(rec?.iter().map(Cell::from_field).collect());
        }
        Ok(Table { columns, rows })
    }
}
