//! Tabular reports rendered as CSV or JSON.

use std::io::Write;

use anyhow::Result;
use serde_json::{json, Map, Value};

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Flag(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // 17 significant digits round-trip every f64.
            Self::Num(x) if x.is_finite() => format!("{x:.16e}"),
            Self::Num(x) => x.to_string(),
            Self::Int(n) => n.to_string(),
            Self::Text(s) => s.clone(),
            Self::Flag(b) => b.to_string(),
            Self::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Self::Num(x) if x.is_finite() => json!(x),
            Self::Num(x) => json!(x.to_string()),
            Self::Int(n) => json!(n),
            Self::Text(s) => json!(s),
            Self::Flag(b) => json!(b),
            Self::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Self::Empty, Self::Num)
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Self::Int(n)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Self::Int(n as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Self::Text(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Self::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Self::Flag(b)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }
}

/// Provenance echoed ahead of the table body.
#[derive(Debug, Clone)]
pub struct Header {
    pub command: &'static str,
    pub config: String,
}

pub fn render(out: &mut dyn Write, format: Format, header: &Header, table: &Table) -> Result<()> {
    match format {
        Format::Csv => render_csv(out, header, table),
        Format::Json => render_json(out, header, table),
    }
}

fn render_csv(out: &mut dyn Write, header: &Header, table: &Table) -> Result<()> {
    writeln!(out, "# shotnoise {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# command: {}", header.command)?;
    writeln!(out, "# config: {}", header.config)?;
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(&table.columns)?;
    for row in &table.rows {
        writer.write_record(row.iter().map(Cell::csv))?;
    }
    writer.flush()?;
    Ok(())
}

fn render_json(out: &mut dyn Write, header: &Header, table: &Table) -> Result<()> {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let fields: Map<String, Value> =
                table.columns.iter().zip(row).map(|(name, cell)| ((*name).to_owned(), cell.json())).collect();
            Value::Object(fields)
        })
        .collect();
    let config: Value = serde_json::from_str(&header.config)?;
    let doc = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": header.command,
        "config": config,
        "rows": rows,
    });
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (Header, Table) {
        let mut table = Table::new(&["x", "label", "missing"]);
        table.push(vec![0.1.into(), "a,b".into(), None.into()]);
        table.push(vec![f64::NAN.into(), "plain".into(), Some(2.0).into()]);
        (Header { command: "price", config: "{\"k\":1}".into() }, table)
    }

    #[test]
    fn csv_has_header_quoting_and_full_precision() {
        let (header, table) = sample();
        let mut buf = Vec::new();
        render(&mut buf, Format::Csv, &header, &table).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert!(lines[0].starts_with("# shotnoise "));
        assert_eq!(lines[3], "x,label,missing");
        assert_eq!(lines[4], "1.0000000000000001e-1,\"a,b\",");
        assert_eq!(lines[5], "NaN,plain,2.0000000000000000e0");
        assert_eq!(lines[4].split(',').next().unwrap().parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn json_rows_are_keyed_by_column() {
        let (header, table) = sample();
        let mut buf = Vec::new();
        render(&mut buf, Format::Json, &header, &table).unwrap();
        let doc: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(doc["command"], "price");
        assert_eq!(doc["config"]["k"], 1);
        assert_eq!(doc["rows"][0]["label"], "a,b");
        assert_eq!(doc["rows"][0]["missing"], Value::Null);
        assert_eq!(doc["rows"][1]["x"], "NaN");
    }
}
