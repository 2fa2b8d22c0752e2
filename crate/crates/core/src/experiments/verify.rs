//! Oracle cross-checks appended to CLI runs with `--verify`.

use super::{ErrorReport, ModelProblem};
use crate::error::Result;
use crate::grid::norm;
use crate::operators::{CoefficientField, DeltaRule, SpectralBounds};
use crate::spectral::apply_fractional_power;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
            passed: value <= limit,
        }
    }
}

/// Checks that depend only on the grid and `alpha`.
pub fn problem_checks(problem: &ModelProblem) -> Result<Vec<Check>> {
    let g = problem.grid();
    let tag = format!("{}x{} alpha={}", g.n1(), g.n2(), problem.alpha());
    let back = apply_fractional_power(problem.basis(), problem.alpha(), problem.reference())?;
    let round_trip = norm(&back.sub(problem.rhs())?) / norm(problem.rhs());
    let delta = SpectralBounds::compute(&CoefficientField::laplacian(*g), DeltaRule::Certified).total();
    let lam = problem.basis().smallest();
    Ok(vec![
        Check::at_most(format!("{tag}: reference round trip"), round_trip, 1e-9),
        Check::at_most(format!("{tag}: delta <= lambda_min"), (delta - lam) / lam, 1e-10),
    ])
}

/// Triangle inequality `eps_ref <= eps + ||w - u||` for every component.
pub fn report_checks(report: &ErrorReport, problem: &ModelProblem) -> Vec<Check> {
    let spatial = problem.spatial_error();
    report
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            Check::at_most(
                format!(
                    "{} theta={} sigma={} N={} component {}: eps_ref - eps - spatial",
                    report.scheme.as_str(),
                    report.theta,
                    report.sigma1,
                    report.steps,
                    i
                ),
                c.eps_ref - c.eps - spatial,
                1e-12,
            )
        })
        .collect()
}
