//! Table serialisation (CSV or JSON) and the run manifest.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::scenario::{Format, ScenarioFields};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    /// Seventeen significant digits, so values survive a text round trip.
    fn csv_text(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json_value(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(_) | Cell::Empty => Value::Null,
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Derived quantities recorded in the manifest for reference.
#[derive(Debug, Clone, Serialize)]
pub struct Derived {
    pub c3: f64,
    pub nonstaticity: f64,
    pub period: f64,
}

pub fn default_out(subject: &str, format: Format) -> PathBuf {
    PathBuf::from(format!("{subject}.{}", format.extension()))
}

/// `data.csv` → `data.csv.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

pub fn write_table(
    table: &Table,
    subject: &str,
    format: Format,
    out: &Path,
) -> Result<(), CliError> {
    let file = File::create(out)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out.display())))?;
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(BufWriter::new(file));
            w.write_record(&table.columns)?;
            for row in &table.rows {
                w.write_record(row.iter().map(Cell::csv_text))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "subject": subject,
                "columns": table.columns,
                "rows": table.rows.iter().map(|r| r.iter().map(Cell::json_value).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            let mut w = BufWriter::new(file);
            serde_json::to_writer(&mut w, &doc).map_err(|e| CliError::Io(e.to_string()))?;
            w.write_all(b"\n")?;
            w.flush()?;
        }
    }
    Ok(())
}

pub fn write_manifest(
    path: &Path,
    scenario: &ScenarioFields,
    derived: &Derived,
    data_file: &Path,
    table: &Table,
) -> Result<(), CliError> {
    let file_name = data_file
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "version": nonstatic_core::VERSION,
        "scenario": scenario,
        "derived": derived,
        "output": {
            "file": file_name,
            "columns": table.columns,
            "rows": table.rows.len(),
        },
    });
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
