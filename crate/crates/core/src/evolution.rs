//! Two-level weighted scheme for the pseudo-time problem
//! `(t D + theta delta I) y' + alpha D y = 0`, `y(0) = (theta delta)^{-alpha} f`.
//!
//! Step `n -> n + 1` with `t_s = (n + sigma) tau` solves
//!
//! ```text
//! [theta delta I + (t_s + alpha tau sigma) D] y^{n+1}
//!     = [theta delta I + (t_s - alpha tau (1 - sigma)) D] y^n
//! ```
//!
//! and `y^N` approximates `A^{-alpha} f`.

use crate::error::{Error, Result};
use crate::grid::{inner_product, norm, GridFunction};
use crate::linsolve::{spd_solve_from, SeparableSolver, ShiftedFullSystem, DEFAULT_CG_TOL};
use crate::operators::{Discretization, FullOperator, GridOperator};
use std::sync::atomic::{AtomicBool, Ordering};

static THETA_ONE_WARNED: AtomicBool = AtomicBool::new(false);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverKind {
    /// Jacobi-preconditioned conjugate gradients; any coefficients.
    #[default]
    ConjugateGradient,
    /// Separable direct solve; constant coefficients only.
    Direct,
}

impl SolverKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "cg" => Ok(SolverKind::ConjugateGradient),
            "direct" => Ok(SolverKind::Direct),
            other => Err(Error::Config(format!(
                "unknown solver kind {other:?} (expected \"cg\" or \"direct\")"
            ))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SolverKind::ConjugateGradient => "cg",
            SolverKind::Direct => "direct",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub alpha: f64,
    pub theta: f64,
    pub sigma: f64,
    pub steps: usize,
    pub tol: f64,
    pub solver: SolverKind,
}

impl SchemeConfig {
    pub fn new(alpha: f64, theta: f64, sigma: f64, steps: usize) -> Result<Self> {
        let cfg = Self {
            alpha,
            theta,
            sigma,
            steps,
            tol: DEFAULT_CG_TOL,
            solver: SolverKind::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        self.tol = tol;
        self.validate()?;
        Ok(self)
    }

    pub fn with_solver(mut self, solver: SolverKind) -> Self {
        self.solver = solver;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad(format!("alpha must lie in (0, 1], got {}", self.alpha));
        }
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return bad(format!("theta must lie in (0, 1], got {}", self.theta));
        }
        if !(0.0..=1.0).contains(&self.sigma) {
            return bad(format!("sigma must lie in [0, 1], got {}", self.sigma));
        }
        if self.steps == 0 {
            return bad("at least one time step is required".into());
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad(format!("solver tolerance must lie in (0, 1), got {}", self.tol));
        }
        Ok(())
    }

    /// Time step `1 / N`.
    pub fn tau(&self) -> f64 {
        1.0 / self.steps as f64
    }

    /// `sigma >= 1/2`.
    pub fn is_unconditionally_stable(&self) -> bool {
        self.sigma >= 0.5
    }
}

/// `y^0 = (theta delta)^{-alpha} f`.
pub fn initial_state(f: &GridFunction, theta: f64, delta: f64, alpha: f64) -> Result<GridFunction> {
    let td = theta * delta;
    if !(td > 0.0 && td.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "theta * delta must be positive, got {td}"
        )));
    }
    Ok(f.scaled(td.powf(-alpha)))
}

/// Left and right operator weights of step `n`: `(t_s + alpha tau sigma, t_s - alpha tau (1 - sigma))`.
pub fn step_weights(cfg: &SchemeConfig, n: usize) -> (f64, f64) {
    let tau = cfg.tau();
    let ts = (n as f64 + cfg.sigma) * tau;
    (
        ts + cfg.alpha * tau * cfg.sigma,
        ts - cfg.alpha * tau * (1.0 - cfg.sigma),
    )
}

/// Reusable stepping state for one `(cfg, D, delta)` triple.
#[derive(Debug, Clone)]
pub struct TwoLevelIntegrator {
    cfg: SchemeConfig,
    d: FullOperator,
    theta_delta: f64,
    direct: Option<SeparableSolver>,
}

impl TwoLevelIntegrator {
    /// `d` is the shifted operator `A - theta delta I`.
    pub fn new(cfg: SchemeConfig, d: FullOperator, delta: f64) -> Result<Self> {
        cfg.validate()?;
        let theta_delta = cfg.theta * delta;
        if !(theta_delta > 0.0 && theta_delta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "theta * delta must be positive, got {theta_delta}"
            )));
        }
        let direct = match cfg.solver {
            SolverKind::Direct => Some(SeparableSolver::new(&d)?),
            SolverKind::ConjugateGradient => None,
        };
        Ok(Self {
            cfg,
            d,
            theta_delta,
            direct,
        })
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.cfg
    }

    pub fn operator(&self) -> &FullOperator {
        &self.d
    }

    pub fn theta_delta(&self) -> f64 {
        self.theta_delta
    }

    /// Advances `y^n` to `y^{n+1}`.
    pub fn step(&self, y: &GridFunction, n: usize) -> Result<GridFunction> {
        if n >= self.cfg.steps {
            return Err(Error::InvalidParameter(format!(
                "step index {n} outside 0..{}",
                self.cfg.steps
            )));
        }
        let (lhs_w, rhs_w) = step_weights(&self.cfg, n);
        let mut rhs = self.d.apply(y)?.scaled(rhs_w);
        rhs.axpy(self.theta_delta, y)?;
        match &self.direct {
            Some(solver) => solver.solve(self.theta_delta, lhs_w, &rhs),
            None => {
                let sys = ShiftedFullSystem::new(&self.d, self.theta_delta, lhs_w);
                spd_solve_from(&sys, &rhs, y.clone(), self.cfg.tol).map(|(x, _)| x)
            }
        }
    }
}

/// One step of the scheme, without reusing solver state.
pub fn two_level_step(
    y: &GridFunction,
    n: usize,
    cfg: &SchemeConfig,
    d: &FullOperator,
    delta: f64,
) -> Result<GridFunction> {
    TwoLevelIntegrator::new(*cfg, d.clone(), delta)?.step(y, n)
}

/// Result of a full run: `y^N` plus per-level histories for `n = 0..=N`.
#[derive(Debug, Clone)]
pub struct TwoLevelRun {
    pub solution: GridFunction,
    /// `||y^n||`.
    pub norms: Vec<f64>,
    /// `(D y^n, y^n)`; nonnegative whenever `D >= 0`.
    pub d_forms: Vec<f64>,
}

impl TwoLevelRun {
    /// `||y^n||_D`, with tiny negative round-off clamped to zero.
    pub fn d_norms(&self) -> Vec<f64> {
        self.d_forms.iter().map(|q| q.max(0.0).sqrt()).collect()
    }
}

/// Integrates from `t = 0` to `t = 1` in `cfg.steps` steps.
pub fn run_two_level(f: &GridFunction, cfg: &SchemeConfig, disc: &Discretization) -> Result<TwoLevelRun> {
    cfg.validate()?;
    if cfg.theta == 1.0 && !THETA_ONE_WARNED.swap(true, Ordering::Relaxed) {
        log::warn!("theta = 1: D = A - delta I is only semidefinite; stability estimate not guaranteed");
    }
    let integ = TwoLevelIntegrator::new(*cfg, disc.shifted_operator(cfg.theta), disc.delta())?;
    let mut y = initial_state(f, cfg.theta, disc.delta(), cfg.alpha)?;
    let mut norms = Vec::with_capacity(cfg.steps + 1);
    let mut d_forms = Vec::with_capacity(cfg.steps + 1);
    let record = |y: &GridFunction, norms: &mut Vec<f64>, d_forms: &mut Vec<f64>| -> Result<()> {
        norms.push(norm(y));
        d_forms.push(inner_product(&integ.d.apply(y)?, y)?);
        Ok(())
    };
    record(&y, &mut norms, &mut d_forms)?;
    for n in 0..cfg.steps {
        y = integ.step(&y, n)?;
        record(&y, &mut norms, &mut d_forms)?;
    }
    log::debug!("two-level run finished: {} steps, final norm {:e}", cfg.steps, norms[cfg.steps]);
    Ok(TwoLevelRun {
        solution: y,
        norms,
        d_forms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2D;
    use crate::operators::{CoefficientField, DeltaRule};
    use crate::spectral::analytic_laplacian_basis;

    #[test]
    fn config_validation() {
        assert!(SchemeConfig::new(0.5, 1.0, 0.5, 10).is_ok());
        assert!(SchemeConfig::new(0.0, 1.0, 0.5, 10).is_err());
        assert!(SchemeConfig::new(0.5, 1.2, 0.5, 10).is_err());
        assert!(SchemeConfig::new(0.5, 0.5, 0.5, 0).is_err());
        assert!(SchemeConfig::new(0.5, 0.5, 0.5, 4).unwrap().with_tol(0.0).is_err());
        let c = SchemeConfig::new(0.5, 0.5, 0.4, 8).unwrap();
        assert_eq!(c.tau() * 8.0, 1.0);
        assert!(!c.is_unconditionally_stable());
    }

    #[test]
    fn initial_state_scaling() {
        let g = Grid2D::unit_square(4).unwrap();
        let f = GridFunction::constant(g, 2.0);
        assert_eq!(initial_state(&f, 0.5, 2.0, 0.7).unwrap(), f);
        assert!(initial_state(&f, 0.0, 2.0, 0.5).is_err());
        let delta = 2.0 * 40000.0 * (std::f64::consts::PI / 200.0).sin().powi(2);
        let y = initial_state(&f, 1.0, delta, 0.5).unwrap();
        assert!((y.values()[0] / 2.0 - 0.2250884).abs() < 1e-6);
    }

    #[test]
    fn single_mode_recurrence() {
        let g = Grid2D::unit_square(16).unwrap();
        let disc = Discretization::new(CoefficientField::laplacian(g), DeltaRule::Certified);
        let basis = analytic_laplacian_basis(&g);
        let phi = basis.mode(2, 1).unwrap();
        let lam = basis.mode_eigenvalue(2, 1).unwrap();
        for solver in [SolverKind::ConjugateGradient, SolverKind::Direct] {
            let cfg = SchemeConfig::new(0.3, 0.75, 0.5, 7).unwrap().with_solver(solver);
            let run = run_two_level(&phi, &cfg, &disc).unwrap();
            let td = cfg.theta * disc.delta();
            let ld = lam - td;
            let mut amp = td.powf(-cfg.alpha);
            for n in 0..cfg.steps {
                let (l, r) = step_weights(&cfg, n);
                amp *= (td + r * ld) / (td + l * ld);
            }
            let err = run.solution.sub(&phi.scaled(amp)).unwrap().max_abs();
            assert!(err <= 1e-11 * amp * phi.max_abs(), "{solver:?}: {err}");
        }
    }

    #[test]
    fn step_index_is_checked() {
        let g = Grid2D::unit_square(4).unwrap();
        let disc = Discretization::new(CoefficientField::laplacian(g), DeltaRule::Certified);
        let cfg = SchemeConfig::new(0.5, 1.0, 1.0, 2).unwrap();
        let y = GridFunction::constant(g, 1.0);
        let d = disc.shifted_operator(1.0);
        assert!(two_level_step(&y, 2, &cfg, &d, disc.delta()).is_err());
        let z = two_level_step(&GridFunction::zeros(g), 0, &cfg, &d, disc.delta()).unwrap();
        assert_eq!(z.max_abs(), 0.0);
    }
}
