use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use super::format_sig;
use super::spec::ExperimentKind;
use crate::dynamics::JuliaRaster;

/// One CSV cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    pub fn csv(&self) -> String {
        match self {
            Cell::Int(k) => k.to_string(),
            Cell::Real(x) => format_sig(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Cell::Text(s) => s.clone(),
        }
    }

    /// JSON value carrying exactly what the CSV shows.
    pub fn json(&self) -> Value {
        match self {
            Cell::Int(k) => Value::from(*k),
            Cell::Real(x) if x.is_finite() => Value::from(format_sig(*x).parse::<f64>().unwrap()),
            Cell::Real(x) => Value::from(format_sig(*x)),
            Cell::Bool(b) => Value::from(*b),
            Cell::Text(s) => Value::from(s.clone()),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(k) => Some(*k as f64),
            Cell::Real(x) => Some(*x),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<u64> for Cell {
    fn from(k: u64) -> Self {
        Cell::Int(k as i64)
    }
}

impl From<usize> for Cell {
    fn from(k: usize) -> Self {
        Cell::Int(k as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// A table with a fixed column order, written to `<stem>.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub stem: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(stem: impl Into<String>, header: &[&'static str]) -> Self {
        Table {
            stem: stem.into(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let k = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| &r[k]).collect())
    }

    /// Numeric column; non-numeric cells read as NaN.
    pub fn values(&self, name: &str) -> Option<Vec<f64>> {
        Some(
            self.column(name)?
                .into_iter()
                .map(|c| c.as_f64().unwrap_or(f64::NAN))
                .collect(),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: serde_json::Map<String, Value> = self
                        .header
                        .iter()
                        .zip(row)
                        .map(|(h, c)| (h.to_string(), c.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// A failed assertion, reported as data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub check: String,
    /// Family index of the offending row, if any.
    pub n: Option<u64>,
    pub detail: String,
}

/// Everything an experiment produced.
#[derive(Clone, Debug)]
pub struct Report {
    pub name: String,
    /// `None` for an empty report.
    pub experiment: Option<ExperimentKind>,
    pub seed: u64,
    pub config_hash: String,
    pub tables: Vec<Table>,
    pub rasters: Vec<(u64, JuliaRaster)>,
    /// Scalar results outside the tables.
    pub summary: BTreeMap<String, Value>,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
    /// First per-degree error; rows computed before it are kept.
    pub failure: Option<String>,
}

impl Report {
    pub fn empty(name: impl Into<String>, seed: u64, config_hash: impl Into<String>) -> Self {
        Report {
            name: name.into(),
            experiment: None,
            seed,
            config_hash: config_hash.into(),
            tables: Vec::new(),
            rasters: Vec::new(),
            summary: BTreeMap::new(),
            violations: Vec::new(),
            notes: Vec::new(),
            failure: None,
        }
    }

    /// No tables and no rasters.
    pub fn is_empty(&self) -> bool {
        self.tables.iter().all(|t| t.rows.is_empty()) && self.rasters.is_empty()
    }

    pub fn table(&self, stem: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.stem == stem)
    }

    /// The primary table.
    pub fn main_table(&self) -> &Table {
        &self.tables[0]
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.failure.is_none()
    }

    pub fn to_json(&self) -> Value {
        let tables: serde_json::Map<String, Value> = self
            .tables
            .iter()
            .map(|t| (t.stem.clone(), t.to_json()))
            .collect();
        serde_json::json!({
            "name": self.name,
            "experiment": self.experiment.map(|k| k.name()),
            "seed": self.seed,
            "config_sha256": self.config_hash,
            "version": env!("CARGO_PKG_VERSION"),
            "summary": self.summary,
            "tables": tables,
            "violations": self.violations,
            "notes": self.notes,
            "failure": self.failure,
        })
    }
}

/// Checks that `values` (in checkpoint order) decrease strictly.
///
/// A step between two values both at or below `floor` passes: the column
/// has converged to noise. With `allowance`, one increase of at most 10%
/// is tolerated.
pub fn check_decreasing(
    check: &str,
    ns: &[u64],
    values: &[f64],
    floor: f64,
    allowance: bool,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut spare = allowance;
    for k in 1..values.len() {
        let (a, b) = (values[k - 1], values[k]);
        if b < a || (a <= floor && b <= floor) {
            continue;
        }
        if spare && b <= 1.1 * a {
            spare = false;
            continue;
        }
        out.push(Violation {
            check: check.into(),
            n: Some(ns[k]),
            detail: format!(
                "{} -> {} from n = {} to n = {}",
                format_sig(a),
                format_sig(b),
                ns[k - 1],
                ns[k]
            ),
        });
    }
    out
}

/// Checks that `values` increase strictly.
pub fn check_increasing(check: &str, ns: &[u64], values: &[f64]) -> Vec<Violation> {
    let negated: Vec<f64> = values.iter().map(|v| -v).collect();
    check_decreasing(check, ns, &negated, f64::NEG_INFINITY, false)
        .into_iter()
        .map(|mut v| {
            v.detail = format!("not increasing at n = {}", v.n.unwrap());
            v
        })
        .collect()
}
