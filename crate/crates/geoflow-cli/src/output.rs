//! Tabular output as CSV (with `#` comment preamble) or JSON.

use crate::args::Format;
use crate::CliError;
use serde_json::{json, Map, Value};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    /// CSV form: floats with 17 significant digits.
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(x) => json!(x.to_string()),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

/// A result table with an optional key/value report.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub report: Vec<(String, Cell)>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<Cell>) {
        self.report.push((key.into(), value.into()));
    }

    pub fn render(&self, format: Format, hash: &str) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => self.render_csv(hash),
            Format::Json => {
                let report: Map<String, Value> = self.report.iter().map(|(k, v)| (k.clone(), v.json())).collect();
                let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
                let doc = json!({ "config_hash": hash, "report": report, "columns": self.columns, "rows": rows });
                let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Numerical(e.to_string()))?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }

    fn render_csv(&self, hash: &str) -> Result<Vec<u8>, CliError> {
        let mut out = format!("# config-hash: {hash}\n").into_bytes();
        for (k, v) in &self.report {
            out.extend_from_slice(format!("# {k}: {}\n", v.csv()).as_bytes());
        }
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| CliError::Numerical(format!("csv output failed: {e}"));
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Numerical(format!("csv output failed: {e}")))
    }
}

/// Writes to `path`, or standard output when absent.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout().write_all(bytes).map_err(|e| CliError::Input(format!("cannot write output: {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_hash_report_and_full_precision() {
        let mut t = Table::new(&["x", "kind"]);
        t.note("n", 3usize);
        t.push(vec![0.1.into(), "rib".into()]);
        let s = String::from_utf8(t.render(Format::Csv, "sha256:ab").unwrap()).unwrap();
        assert_eq!(s, "# config-hash: sha256:ab\n# n: 3\nx,kind\n1.0000000000000001e-1,rib\n");
        let back: f64 = s.lines().nth(3).unwrap().split(',').next().unwrap().parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new(&["x"]);
        t.push(vec![f64::NAN.into()]);
        let v: Value = serde_json::from_slice(&t.render(Format::Json, "h").unwrap()).unwrap();
        assert_eq!(v["config_hash"], "h");
        assert_eq!(v["rows"][0][0], "NaN");
    }
}
