//! CSV and JSON output of experiment results.

use super::ErrorReport;
use crate::error::{Error, Result};
use serde::Serialize;
use std::io::Write;
use std::path::Path;

pub const CSV_HEADER: [&str; 13] = [
    "scheme", "alpha", "theta", "sigma1", "sigma2", "n1", "n2", "steps", "component", "eps",
    "eps_A", "eps_ref", "wall_ms",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!(
                "unknown output format {other:?} (expected \"csv\" or \"json\")"
            ))),
        }
    }

    /// `.json` selects JSON, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// One output line: one solution component of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub scheme: &'static str,
    pub alpha: f64,
    pub theta: f64,
    pub sigma1: f64,
    pub sigma2: Option<f64>,
    pub n1: usize,
    pub n2: usize,
    pub steps: usize,
    /// 0 for the two-level scheme, `1..=p` for splitting components.
    pub component: usize,
    pub eps: f64,
    #[serde(rename = "eps_A")]
    pub eps_a: f64,
    pub eps_ref: f64,
    pub wall_ms: f64,
}

/// Flattens reports into rows. With `timing = false` the wall time is
/// written as zero so that output is reproducible byte for byte.
pub fn rows(reports: &[ErrorReport], timing: bool) -> Vec<ResultRow> {
    let mut out = Vec::new();
    for r in reports {
        let split = r.sigma2.is_some();
        for (i, c) in r.components.iter().enumerate() {
            out.push(ResultRow {
                scheme: r.scheme.as_str(),
                alpha: r.alpha,
                theta: r.theta,
                sigma1: r.sigma1,
                sigma2: r.sigma2,
                n1: r.n1,
                n2: r.n2,
                steps: r.steps,
                component: if split { i + 1 } else { 0 },
                eps: c.eps,
                eps_a: c.eps_a,
                eps_ref: c.eps_ref,
                wall_ms: if timing { r.wall_ms } else { 0.0 },
            });
        }
    }
    out
}

pub fn write_csv<W: Write>(w: W, rows: &[ResultRow]) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wtr.write_record(CSV_HEADER)?;
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}
