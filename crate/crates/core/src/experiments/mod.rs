//! Model problem, error measurement and experiment drivers.
//!
//! The model problem is `-Laplace` on a rectangle with a right-hand side made
//! of the two sine modes `(1, 1)` and `(3, 2)`. Errors are measured against
//! both the exact continuous solution `u` and the discrete spectral solution
//! `w = A^{-alpha} f`.

pub mod config;
pub mod output;
pub mod sweep;
pub mod tables;
pub mod verify;

use crate::error::{Error, Result};
use crate::evolution::{run_two_level, SchemeConfig, SolverKind};
use crate::grid::{norm, norm_energy, Grid2D, GridFunction};
use crate::linsolve::DEFAULT_CG_TOL;
use crate::operators::{CoefficientField, DeltaRule, Discretization};
use crate::spectral::{
    analytic_laplacian_basis, exact_continuous_solution, reference_solve, sine_mode, EigenBasis,
    MODEL_MODES,
};
use crate::splitting::{run_splitting, EnergyRecord, SplittingSetup};
use serde::Serialize;
use std::time::Instant;

pub use config::ExperimentSpec;
pub use sweep::{convergence_sweep, observed_order, OrderEstimate, SweepResult};
pub use tables::{reproduce_table, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Preset {
    /// `k = 1`, `c = 0`, `f` = sum of the sine modes `(1, 1)` and `(3, 2)`.
    #[default]
    TwoMode,
}

impl Preset {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "two-mode" => Ok(Preset::TwoMode),
            other => Err(Error::Config(format!(
                "unknown problem preset {other:?} (expected \"two-mode\")"
            ))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::TwoMode => "two-mode",
        }
    }
}

/// Coefficients and right-hand side of the model problem.
pub fn preset_model_problem(grid: &Grid2D) -> (CoefficientField, GridFunction) {
    let mut f = GridFunction::zeros(*grid);
    for (m1, m2) in MODEL_MODES {
        f.axpy(1.0, &sine_mode(grid, m1, m2))
            .expect("modes live on the same grid");
    }
    (CoefficientField::laplacian(*grid), f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    TwoLevel,
    Splitting,
}

impl SchemeKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "two_level" => Ok(SchemeKind::TwoLevel),
            "splitting" => Ok(SchemeKind::Splitting),
            other => Err(Error::Config(format!(
                "unknown scheme kind {other:?} (expected \"two_level\" or \"splitting\")"
            ))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::TwoLevel => "two_level",
            SchemeKind::Splitting => "splitting",
        }
    }
}

/// Model problem on one grid for one `alpha`, with both references cached.
#[derive(Debug, Clone)]
pub struct ModelProblem {
    grid: Grid2D,
    alpha: f64,
    f: GridFunction,
    exact: GridFunction,
    reference: GridFunction,
    basis: EigenBasis,
}

/// Errors of one approximate solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComponentErrors {
    /// `||y - u||`.
    pub eps: f64,
    /// `||y - u||_A`.
    pub eps_a: f64,
    /// `||y - w||`.
    pub eps_ref: f64,
}

impl ModelProblem {
    pub fn new(grid: Grid2D, alpha: f64) -> Result<Self> {
        let (_, f) = preset_model_problem(&grid);
        let basis = analytic_laplacian_basis(&grid);
        let reference = reference_solve(&basis, alpha, &f)?;
        let exact = exact_continuous_solution(&grid, alpha)?;
        Ok(Self {
            grid,
            alpha,
            f,
            exact,
            reference,
            basis,
        })
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rhs(&self) -> &GridFunction {
        &self.f
    }

    /// Exact continuous solution sampled on the grid.
    pub fn exact(&self) -> &GridFunction {
        &self.exact
    }

    /// Discrete solution `A^{-alpha} f`.
    pub fn reference(&self) -> &GridFunction {
        &self.reference
    }

    pub fn basis(&self) -> &EigenBasis {
        &self.basis
    }

    pub fn coefficients(&self) -> CoefficientField {
        CoefficientField::laplacian(self.grid)
    }

    pub fn discretization(&self, rule: DeltaRule) -> Discretization {
        Discretization::new(self.coefficients(), rule)
    }

    pub fn errors(&self, y: &GridFunction) -> Result<ComponentErrors> {
        let e = y.sub(&self.exact)?;
        let a = crate::operators::FullOperator::assemble(&self.coefficients());
        Ok(ComponentErrors {
            eps: norm(&e),
            eps_a: norm_energy(&e, &a)?,
            eps_ref: norm(&y.sub(&self.reference)?),
        })
    }

    /// Discretisation error `||w - u||`, independent of the time stepping.
    pub fn spatial_error(&self) -> f64 {
        norm(&self.reference.sub(&self.exact).expect("same grid"))
    }
}

/// Everything needed to run one scheme on the model problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSpec {
    pub scheme: SchemeKind,
    pub grid: Grid2D,
    pub alpha: f64,
    pub theta: f64,
    /// `sigma` of the two-level scheme, `sigma1` of the splitting scheme.
    pub sigma1: f64,
    /// Splitting scheme only.
    pub sigma2: f64,
    pub steps: usize,
    pub tol: f64,
    pub delta_rule: DeltaRule,
    pub solver: SolverKind,
}

impl RunSpec {
    pub fn two_level(grid: Grid2D, alpha: f64, theta: f64, sigma: f64, steps: usize) -> Self {
        Self {
            scheme: SchemeKind::TwoLevel,
            grid,
            alpha,
            theta,
            sigma1: sigma,
            sigma2: sigma,
            steps,
            tol: DEFAULT_CG_TOL,
            delta_rule: DeltaRule::Certified,
            solver: SolverKind::ConjugateGradient,
        }
    }

    pub fn splitting(grid: Grid2D, alpha: f64, theta: f64, sigma1: f64, sigma2: f64, steps: usize) -> Self {
        Self {
            scheme: SchemeKind::Splitting,
            sigma1,
            sigma2,
            ..Self::two_level(grid, alpha, theta, sigma1, steps)
        }
    }

    pub fn with_rule(self, delta_rule: DeltaRule) -> Self {
        Self { delta_rule, ..self }
    }

    pub fn with_solver(self, solver: SolverKind) -> Self {
        Self { solver, ..self }
    }

    pub fn scheme_config(&self) -> Result<SchemeConfig> {
        Ok(SchemeConfig::new(self.alpha, self.theta, self.sigma1, self.steps)?
            .with_tol(self.tol)?
            .with_solver(self.solver))
    }
}

/// Errors of one run; one entry per solution component.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub scheme: SchemeKind,
    pub alpha: f64,
    pub theta: f64,
    pub sigma1: f64,
    pub sigma2: Option<f64>,
    pub n1: usize,
    pub n2: usize,
    #[serde(skip)]
    pub grid: Grid2D,
    pub steps: usize,
    /// A single entry for the two-level scheme, `p` entries for splitting.
    pub components: Vec<ComponentErrors>,
    #[serde(skip)]
    pub energies: Vec<EnergyRecord>,
    pub wall_ms: f64,
}

impl ErrorReport {
    pub fn component(&self, i: usize) -> &ComponentErrors {
        &self.components[i]
    }
}

/// Errors of `y` (one or several components) for the model problem.
pub fn compute_errors(ys: &[GridFunction], problem: &ModelProblem) -> Result<Vec<ComponentErrors>> {
    ys.iter().map(|y| problem.errors(y)).collect()
}

/// Runs `spec` on `problem`, whose grid and `alpha` must match.
pub fn run_on(spec: &RunSpec, problem: &ModelProblem) -> Result<ErrorReport> {
    if spec.grid != *problem.grid() || spec.alpha != problem.alpha() {
        return Err(Error::InvalidParameter(
            "run parameters do not match the model problem".into(),
        ));
    }
    let disc = problem.discretization(spec.delta_rule);
    let start = Instant::now();
    let (ys, energies, sigma2) = match spec.scheme {
        SchemeKind::TwoLevel => {
            let run = run_two_level(problem.rhs(), &spec.scheme_config()?, &disc)?;
            (vec![run.solution], Vec::new(), None)
        }
        SchemeKind::Splitting => {
            let setup = SplittingSetup::new(
                &disc,
                spec.alpha,
                spec.theta,
                spec.sigma1,
                spec.sigma2,
                spec.steps,
            )?;
            let run = run_splitting(problem.rhs(), &setup)?;
            (run.state.current, run.energies, Some(spec.sigma2))
        }
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(ErrorReport {
        scheme: spec.scheme,
        alpha: spec.alpha,
        theta: spec.theta,
        sigma1: spec.sigma1,
        sigma2,
        n1: spec.grid.n1(),
        n2: spec.grid.n2(),
        grid: spec.grid,
        steps: spec.steps,
        components: compute_errors(&ys, problem)?,
        energies,
        wall_ms,
    })
}

/// Builds the model problem for `spec` and runs it.
pub fn run(spec: &RunSpec) -> Result<ErrorReport> {
    run_on(spec, &ModelProblem::new(spec.grid, spec.alpha)?)
}

/// Runs every spec in order, sharing model problems between runs on the
/// same grid and `alpha`.
pub fn run_all(specs: &[RunSpec]) -> Result<Vec<ErrorReport>> {
    let mut problems: Vec<ModelProblem> = Vec::new();
    let mut out = Vec::with_capacity(specs.len());
    for spec in specs {
        let idx = match problems
            .iter()
            .position(|p| *p.grid() == spec.grid && p.alpha() == spec.alpha)
        {
            Some(i) => i,
            None => {
                problems.push(ModelProblem::new(spec.grid, spec.alpha)?);
                problems.len() - 1
            }
        };
        let report = run_on(spec, &problems[idx])?;
        log::info!(
            "{} alpha={} theta={} sigma={} grid={}x{} N={}: eps={:.7}",
            spec.scheme.as_str(),
            spec.alpha,
            spec.theta,
            spec.sigma1,
            spec.grid.n1(),
            spec.grid.n2(),
            spec.steps,
            report.components[0].eps
        );
        out.push(report);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_values() {
        let g = Grid2D::unit_square(10).unwrap();
        let (c, f) = preset_model_problem(&g);
        assert_eq!(c, CoefficientField::laplacian(g));
        assert!((f.at(5, 5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exact_input_has_zero_error() {
        let g = Grid2D::unit_square(12).unwrap();
        let p = ModelProblem::new(g, 0.5).unwrap();
        let e = p.errors(&p.exact().clone()).unwrap();
        assert_eq!(e.eps, 0.0);
        assert_eq!(e.eps_a, 0.0);
        let r = p.errors(&p.reference().clone()).unwrap();
        assert_eq!(r.eps_ref, 0.0);
        assert!(r.eps > 0.0 && (r.eps - p.spatial_error()).abs() < 1e-15);
    }

    #[test]
    fn parse_names() {
        assert_eq!(SchemeKind::parse("splitting").unwrap(), SchemeKind::Splitting);
        assert!(SchemeKind::parse("adi").is_err());
        assert_eq!(Preset::parse("two-mode").unwrap().as_str(), "two-mode");
        assert!(Preset::parse("other").is_err());
    }

    #[test]
    fn mismatched_problem_is_rejected() {
        let g = Grid2D::unit_square(8).unwrap();
        let p = ModelProblem::new(g, 0.5).unwrap();
        let spec = RunSpec::two_level(g, 0.3, 1.0, 1.0, 4);
        assert!(run_on(&spec, &p).is_err());
    }
}
