//! Report tables, CSV emission and the run summary.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::harness::config::{ExperimentConfig, Suite};
use crate::matrix::fmt17;

/// Generator behind every randomized trial.
pub const RNG_NAME: &str = "ChaCha8 (rand_chacha 0.3), one stream per trial";

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => fmt17(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => v.replace(',', ";"),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// One row of a lower-bound comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundRow {
    pub k: usize,
    pub sum_computed: f64,
    pub bound_value: f64,
    pub margin: f64,
    /// Negative right-hand side; the row passes trivially.
    pub vacuous: bool,
    pub pass: bool,
}

impl BoundRow {
    pub fn new(k: usize, computed: f64, bound: f64) -> Self {
        Self {
            k,
            sum_computed: computed,
            bound_value: bound,
            margin: computed - bound,
            vacuous: bound < 0.0,
            pass: computed >= bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    /// `sum` (Σ λ_j) or `single` (λ_k).
    pub kind: String,
    pub mu: f64,
    pub n_grid: usize,
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn worst_margin(&self) -> f64 {
        self.rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub pass: bool,
    pub details: Value,
    pub tables: Vec<Table>,
}

impl SuiteReport {
    pub fn gating(&self) -> bool {
        self.suite.is_gating()
    }

    /// A failing diagnostic never fails the run.
    pub fn blocks_run(&self) -> bool {
        self.gating() && !self.pass
    }
}

pub fn summary_json(cfg: &ExperimentConfig, report: &SuiteReport) -> Value {
    json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "rng": RNG_NAME,
        "config": cfg,
        "suite": report.suite,
        "gating": report.gating(),
        "pass": report.pass,
        "details": report.details,
    })
}

/// Writes `summary.json` and one CSV per table into `dir`.
pub fn write_outputs(dir: &Path, cfg: &ExperimentConfig, report: &SuiteReport) -> Result<()> {
    fs::create_dir_all(dir)?;
    for t in &report.tables {
        fs::write(dir.join(format!("{}.csv", t.name)), t.to_csv())?;
    }
    let mut f = fs::File::create(dir.join("summary.json"))?;
    serde_json::to_writer_pretty(&mut f, &summary_json(cfg, report))?;
    f.write_all(b"\n")?;
    Ok(())
}
