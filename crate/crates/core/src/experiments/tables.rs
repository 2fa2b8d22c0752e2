//! The six standard error tables of the model problem.
//!
//! | id | scheme    | varied                  | fixed                                |
//! |----|-----------|-------------------------|--------------------------------------|
//! | 1  | two-level | N, theta in {1, 0.5}    | sigma = 1, 100 x 100, alpha = 0.5    |
//! | 2  | two-level | N, theta in {1, 0.5}    | sigma = 0.5                          |
//! | 3  | two-level | grid size, sigma        | theta = 1, N = 80                    |
//! | 4  | two-level | alpha, sigma            | theta = 1, N = 80, 100 x 100         |
//! | 5  | splitting | N                       | theta = 1, sigma1 = sigma2 = 1       |
//! | 6  | splitting | N                       | theta = 0.5                          |
//!
//! Tables 1-4 use [`DeltaRule::InteriorCount`] and the separable direct
//! solver; tables 5-6 use the certified bound.

use super::{run_all, ErrorReport, RunSpec, SchemeKind};
use crate::error::{Error, Result};
use crate::evolution::SolverKind;
use crate::grid::Grid2D;
use crate::operators::DeltaRule;
use serde::Serialize;
use std::fmt::Write as _;

pub const TIME_STEPS: [usize; 5] = [5, 10, 20, 40, 80];
pub const GRID_SIZES: [usize; 5] = [25, 50, 100, 200, 400];
pub const ALPHAS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub label: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub id: u8,
    pub title: String,
    pub column_label: String,
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
    #[serde(skip)]
    pub reports: Vec<ErrorReport>,
}

impl Table {
    pub fn row(&self, label: &str) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    /// Fixed-width text with seven decimals.
    pub fn render(&self) -> String {
        let label_w = self
            .rows
            .iter()
            .map(|r| r.label.len())
            .chain([self.column_label.len()])
            .max()
            .unwrap_or(0);
        let mut s = String::new();
        let _ = writeln!(s, "Table {}: {}", self.id, self.title);
        let _ = write!(s, "{:<label_w$}", self.column_label);
        for c in &self.columns {
            let _ = write!(s, "  {c:>10}");
        }
        s.push('\n');
        let _ = writeln!(s, "{}", "-".repeat(label_w + 12 * self.columns.len()));
        for r in &self.rows {
            let _ = write!(s, "{:<label_w$}", r.label);
            for v in &r.values {
                let _ = write!(s, "  {v:>10.7}");
            }
            s.push('\n');
        }
        s
    }
}

fn base_grid(n: usize) -> Grid2D {
    Grid2D::unit_square(n).expect("table grids are valid")
}

fn two_level(grid: Grid2D, alpha: f64, theta: f64, sigma: f64, steps: usize) -> RunSpec {
    RunSpec::two_level(grid, alpha, theta, sigma, steps)
        .with_rule(DeltaRule::InteriorCount)
        .with_solver(SolverKind::Direct)
}

/// Rows `eps (label)` and `eps_A (label)` for each group of five reports.
fn two_level_rows(reports: &[ErrorReport], labels: &[&str]) -> Vec<TableRow> {
    let mut rows = Vec::new();
    for (chunk, label) in reports.chunks(5).zip(labels) {
        rows.push(TableRow {
            label: format!("eps ({label})"),
            values: chunk.iter().map(|r| r.components[0].eps).collect(),
        });
        rows.push(TableRow {
            label: format!("eps_A ({label})"),
            values: chunk.iter().map(|r| r.components[0].eps_a).collect(),
        });
    }
    rows
}

fn steps_columns() -> Vec<String> {
    TIME_STEPS.iter().map(|n| n.to_string()).collect()
}

/// Runs the parameter grid of table `id` (1 to 6).
pub fn reproduce_table(id: u8) -> Result<Table> {
    let g100 = base_grid(100);
    match id {
        1 | 2 => {
            let sigma = if id == 1 { 1.0 } else { 0.5 };
            let specs: Vec<RunSpec> = [1.0, 0.5]
                .iter()
                .flat_map(|&theta| TIME_STEPS.map(|n| two_level(g100, 0.5, theta, sigma, n)))
                .collect();
            let reports = run_all(&specs)?;
            Ok(Table {
                id,
                title: format!("two-level scheme, sigma = {sigma}"),
                column_label: "N".into(),
                columns: steps_columns(),
                rows: two_level_rows(&reports, &["theta = 1", "theta = 0.5"]),
                reports,
            })
        }
        3 => {
            let specs: Vec<RunSpec> = [1.0, 0.5]
                .iter()
                .flat_map(|&sigma| GRID_SIZES.map(|n| two_level(base_grid(n), 0.5, 1.0, sigma, 80)))
                .collect();
            let reports = run_all(&specs)?;
            Ok(Table {
                id,
                title: "error for various grids in space (theta = 1, N = 80)".into(),
                column_label: "N1 = N2".into(),
                columns: GRID_SIZES.iter().map(|n| n.to_string()).collect(),
                rows: two_level_rows(&reports, &["sigma = 1", "sigma = 0.5"]),
                reports,
            })
        }
        4 => {
            let specs: Vec<RunSpec> = [1.0, 0.5]
                .iter()
                .flat_map(|&sigma| ALPHAS.map(|a| two_level(g100, a, 1.0, sigma, 80)))
                .collect();
            let reports = run_all(&specs)?;
            Ok(Table {
                id,
                title: "error for various alpha (theta = 1, N = 80)".into(),
                column_label: "alpha".into(),
                columns: ALPHAS.iter().map(|a| a.to_string()).collect(),
                rows: two_level_rows(&reports, &["sigma = 1", "sigma = 0.5"]),
                reports,
            })
        }
        5 | 6 => {
            let theta = if id == 5 { 1.0 } else { 0.5 };
            let specs: Vec<RunSpec> = TIME_STEPS
                .iter()
                .map(|&n| RunSpec::splitting(g100, 0.5, theta, 1.0, 1.0, n))
                .collect();
            let reports = run_all(&specs)?;
            let mut rows = Vec::new();
            for i in 0..2 {
                rows.push(TableRow {
                    label: format!("eps^({})", i + 1),
                    values: reports.iter().map(|r| r.components[i].eps).collect(),
                });
                rows.push(TableRow {
                    label: format!("eps_A^({})", i + 1),
                    values: reports.iter().map(|r| r.components[i].eps_a).collect(),
                });
            }
            debug_assert!(reports.iter().all(|r| r.scheme == SchemeKind::Splitting));
            Ok(Table {
                id,
                title: format!("splitting scheme, theta = {theta}"),
                column_label: "N".into(),
                columns: steps_columns(),
                rows,
                reports,
            })
        }
        other => Err(Error::InvalidParameter(format!(
            "table id must be 1 to 6, got {other}"
        ))),
    }
}
