use std::fs;
use std::path::Path;

use serde_json::{Map, Value};

use super::config::ReportFormat;
use super::run::CaseResult;
use crate::error::{Error, Result};

pub const REPORT_COLUMNS: [&str; 14] = [
    "case",
    "algorithm",
    "jaccard",
    "jaccard_distance",
    "dice",
    "accuracy",
    "precision",
    "recall",
    "specificity",
    "f_measure",
    "g_measure",
    "iterations",
    "final_t",
    "wall_time_s",
];

pub const UNDEFINED: &str = "n/a";

enum Cell {
    Text(String),
    Real(f64),
    Int(usize),
    Undefined,
}

impl Cell {
    fn opt_real(v: Option<f64>) -> Self {
        v.map_or(Cell::Undefined, Cell::Real)
    }

    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Real(v) => format!("{v:.6}"),
            Cell::Int(n) => n.to_string(),
            Cell::Undefined => UNDEFINED.to_string(),
        }
    }

    /// Reals are rounded exactly as in the CSV rendering.
    fn to_json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Real(_) => {
                let rounded: f64 = self.render().parse().expect("formatted float parses");
                serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
            }
            Cell::Int(n) => Value::from(*n),
            Cell::Undefined => Value::String(UNDEFINED.to_string()),
        }
    }
}

fn cells(r: &CaseResult) -> [Cell; 14] {
    let m = &r.metrics;
    [
        Cell::Text(r.label.clone()),
        Cell::Text(r.algorithm.name().to_string()),
        Cell::Real(m.jaccard),
        Cell::Real(m.jaccard_distance),
        Cell::Real(m.dice),
        Cell::Real(m.accuracy),
        Cell::opt_real(m.precision),
        Cell::opt_real(m.recall),
        Cell::opt_real(m.specificity),
        Cell::opt_real(m.f_measure),
        Cell::opt_real(m.g_measure),
        r.trace
            .as_ref()
            .map_or(Cell::Undefined, |t| Cell::Int(t.iterations)),
        r.trace
            .as_ref()
            .map_or(Cell::Undefined, |t| Cell::Real(t.final_t)),
        Cell::Real(r.wall_time_s),
    ]
}

pub fn render_csv(results: &[CaseResult]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::format("CSV", e.to_string());
    w.write_record(REPORT_COLUMNS).map_err(csv_err)?;
    for r in results {
        w.write_record(cells(r).iter().map(Cell::render))
            .map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::format("CSV", e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

pub fn render_json(results: &[CaseResult]) -> String {
    let rows: Vec<Value> = results
        .iter()
        .map(|r| {
            let obj: Map<String, Value> = REPORT_COLUMNS
                .iter()
                .zip(cells(r).iter())
                .map(|(k, c)| (k.to_string(), c.to_json()))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Writes one header plus one row per result, in the order given.
pub fn emit_report(
    results: &[CaseResult],
    format: ReportFormat,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    if results.is_empty() {
        return Err(Error::invalid("results", "nothing to report"));
    }
    let text = match format {
        ReportFormat::Csv => render_csv(results)?,
        ReportFormat::Json => render_json(results),
    };
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
