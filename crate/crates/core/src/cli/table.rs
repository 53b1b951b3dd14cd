use std::io::Write;

use serde_json::{json, Map, Value};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Int,
    Float,
    Text,
    /// Exact integers and rationals, written as `p` or `p/q`.
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Exact(String),
}

impl Cell {
    pub fn kind(&self) -> ColumnKind {
        match self {
            Self::Int(_) => ColumnKind::Int,
            Self::Float(_) => ColumnKind::Float,
            Self::Text(_) => ColumnKind::Text,
            Self::Exact(_) => ColumnKind::Exact,
        }
    }

    pub fn exact(v: impl ToString) -> Self {
        Self::Exact(v.to_string())
    }

    pub fn text(v: impl Into<String>) -> Self {
        Self::Text(v.into())
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Self::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Self::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Self::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Self::Int(v as i64)
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

/// A rectangular, column-typed result with a note on how it was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<Column>,
    rows: Vec<Vec<Cell>>,
    pub provenance: String,
}

impl ResultTable {
    pub fn new(columns: &[(&str, ColumnKind)], provenance: impl Into<String>) -> Self {
        Self {
            columns: columns.iter().map(|&(n, kind)| Column { name: n.to_string(), kind }).collect(),
            rows: Vec::new(),
            provenance: provenance.into(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return invalid(format!("row has {} cells for {} columns", row.len(), self.columns.len()));
        }
        if let Some((c, col)) = row.iter().zip(&self.columns).find(|(c, col)| c.kind() != col.kind) {
            return invalid(format!("column `{}` holds {:?}, got {:?}", col.name, col.kind, c.kind()));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn write_csv(&self, sink: &mut dyn Write, digits: usize) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(self.columns.iter().map(|c| &c.name)).map_err(io_error)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Int(v) => v.to_string(),
                Cell::Float(v) => format_float(*v, digits),
                Cell::Text(s) | Cell::Exact(s) => s.clone(),
            }))
            .map_err(io_error)?;
        }
        w.flush().map_err(io_error)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|c| match c {
                            Cell::Int(v) => json!(v),
                            Cell::Float(v) if v.is_finite() => json!(v),
                            Cell::Float(v) => json!(format_float(*v, 17)),
                            Cell::Text(s) | Cell::Exact(s) => json!(s),
                        })
                        .collect(),
                )
            })
            .collect();
        let mut obj = Map::new();
        obj.insert("columns".into(), serde_json::to_value(&self.columns).expect("columns serialize"));
        obj.insert("rows".into(), Value::Array(rows));
        obj.insert("provenance".into(), json!(self.provenance));
        Value::Object(obj)
    }

    pub fn write_json(&self, sink: &mut dyn Write) -> Result<()> {
        serde_json::to_writer_pretty(&mut *sink, &self.to_json()).map_err(|e| Error::Invalid(e.to_string()))?;
        writeln!(sink).map_err(io_error)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Invalid(format!("malformed table JSON: {m}"));
        let v: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
        let columns: Vec<Column> =
            serde_json::from_value(v.get("columns").cloned().ok_or_else(|| bad("no columns"))?).map_err(|e| bad(&e.to_string()))?;
        let provenance = v.get("provenance").and_then(Value::as_str).unwrap_or_default().to_string();
        let mut table = Self { columns, rows: Vec::new(), provenance };
        for row in v.get("rows").and_then(Value::as_array).ok_or_else(|| bad("no rows"))? {
            let cells = row.as_array().ok_or_else(|| bad("row is not an array"))?;
            if cells.len() != table.columns.len() {
                return Err(bad("ragged row"));
            }
            let mut out = Vec::with_capacity(cells.len());
            for (cell, col) in cells.iter().zip(&table.columns) {
                out.push(match col.kind {
                    ColumnKind::Int => Cell::Int(cell.as_i64().ok_or_else(|| bad("expected integer"))?),
                    ColumnKind::Float => Cell::Float(match cell {
                        Value::String(s) => parse_float(s).ok_or_else(|| bad("expected number"))?,
                        _ => cell.as_f64().ok_or_else(|| bad("expected number"))?,
                    }),
                    ColumnKind::Text => Cell::Text(cell.as_str().ok_or_else(|| bad("expected string"))?.into()),
                    ColumnKind::Exact => Cell::Exact(cell.as_str().ok_or_else(|| bad("expected string"))?.into()),
                });
            }
            table.rows.push(out);
        }
        Ok(table)
    }
}

fn io_error(e: impl std::fmt::Display) -> Error {
    Error::Invalid(format!("write failed: {e}"))
}

fn parse_float(s: &str) -> Option<f64> {
    match s {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        _ => s.parse().ok(),
    }
}

/// `%g`-style rendering with `digits` significant digits and trailing zeros
/// dropped; 17 digits round-trip every double.
pub fn format_float(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let digits = digits.clamp(1, 17);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
