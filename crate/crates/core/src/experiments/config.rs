//! TOML experiment files.
//!
//! ```toml
//! problem.preset = "two-mode"
//! grid.n1 = [50, 100]      # scalar or list; n2 defaults to n1
//! grid.l1 = 1.0
//! alpha = 0.5
//! theta = [1.0, 0.5]
//! scheme.kind = "two_level" # or "splitting"
//! scheme.sigma = 0.5        # two_level; splitting uses sigma1/sigma2
//! steps = [20, 40, 80]
//! solver.tol = 1e-12
//! solver.kind = "cg"        # or "direct"
//! delta.rule = "certified"  # or "interior-count"
//! ```
//!
//! Unknown keys are rejected.

use super::{Preset, RunSpec, SchemeKind};
use crate::error::{Error, Result};
use crate::evolution::SolverKind;
use crate::grid::Grid2D;
use crate::linsolve::DEFAULT_CG_TOL;
use crate::operators::DeltaRule;
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemSection {
    preset: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSection {
    n1: Option<OneOrMany<usize>>,
    n2: Option<OneOrMany<usize>>,
    l1: Option<f64>,
    l2: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeSection {
    kind: Option<String>,
    sigma: Option<OneOrMany<f64>>,
    sigma1: Option<OneOrMany<f64>>,
    sigma2: Option<OneOrMany<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolverSection {
    tol: Option<f64>,
    kind: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeltaSection {
    rule: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    problem: ProblemSection,
    #[serde(default)]
    grid: GridSection,
    alpha: Option<OneOrMany<f64>>,
    theta: Option<OneOrMany<f64>>,
    #[serde(default)]
    scheme: SchemeSection,
    steps: Option<OneOrMany<usize>>,
    #[serde(default)]
    solver: SolverSection,
    #[serde(default)]
    delta: DeltaSection,
}

/// A parsed experiment: fixed settings plus nonempty sweep lists.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub preset: Preset,
    pub scheme: SchemeKind,
    /// Paired `(n1, n2)` grid sizes.
    pub grids: Vec<(usize, usize)>,
    pub l1: f64,
    pub l2: f64,
    pub alphas: Vec<f64>,
    pub thetas: Vec<f64>,
    /// `sigma` (two-level) or `sigma1` (splitting).
    pub sigma1: Vec<f64>,
    /// Splitting only.
    pub sigma2: Vec<f64>,
    pub steps: Vec<usize>,
    pub tol: f64,
    pub solver: SolverKind,
    pub delta_rule: DeltaRule,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            preset: Preset::TwoMode,
            scheme: SchemeKind::TwoLevel,
            grids: vec![(100, 100)],
            l1: 1.0,
            l2: 1.0,
            alphas: vec![0.5],
            thetas: vec![1.0],
            sigma1: vec![1.0],
            sigma2: vec![1.0],
            steps: vec![20],
            tol: DEFAULT_CG_TOL,
            solver: SolverKind::ConjugateGradient,
            delta_rule: DeltaRule::Certified,
        }
    }
}

fn nonempty<T>(name: &str, v: Vec<T>) -> Result<Vec<T>> {
    if v.is_empty() {
        Err(Error::Config(format!("{name} must not be an empty list")))
    } else {
        Ok(v)
    }
}

impl ExperimentSpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut spec = ExperimentSpec::default();
        if let Some(p) = raw.problem.preset {
            spec.preset = Preset::parse(&p)?;
        }
        if let Some(k) = raw.scheme.kind {
            spec.scheme = SchemeKind::parse(&k)?;
        }
        match spec.scheme {
            SchemeKind::TwoLevel => {
                if raw.scheme.sigma1.is_some() || raw.scheme.sigma2.is_some() {
                    return Err(Error::Config(
                        "scheme.sigma1 / scheme.sigma2 apply to the splitting scheme; use scheme.sigma".into(),
                    ));
                }
                if let Some(s) = raw.scheme.sigma {
                    spec.sigma1 = nonempty("scheme.sigma", s.into_vec())?;
                }
                spec.sigma2 = spec.sigma1.clone();
            }
            SchemeKind::Splitting => {
                if raw.scheme.sigma.is_some() {
                    return Err(Error::Config(
                        "scheme.sigma applies to the two_level scheme; use scheme.sigma1 and scheme.sigma2".into(),
                    ));
                }
                if let Some(s) = raw.scheme.sigma1 {
                    spec.sigma1 = nonempty("scheme.sigma1", s.into_vec())?;
                }
                if let Some(s) = raw.scheme.sigma2 {
                    spec.sigma2 = nonempty("scheme.sigma2", s.into_vec())?;
                }
            }
        }
        let n1 = match raw.grid.n1 {
            Some(v) => nonempty("grid.n1", v.into_vec())?,
            None => vec![100],
        };
        let n2 = match raw.grid.n2 {
            Some(v) => nonempty("grid.n2", v.into_vec())?,
            None => n1.clone(),
        };
        spec.grids = match (n1.len(), n2.len()) {
            (a, b) if a == b => n1.into_iter().zip(n2).collect(),
            (1, _) => n2.iter().map(|&b| (n1[0], b)).collect(),
            (_, 1) => n1.iter().map(|&a| (a, n2[0])).collect(),
            (a, b) => {
                return Err(Error::Config(format!(
                    "grid.n1 has {a} entries and grid.n2 has {b}; lists must match or one must be scalar"
                )))
            }
        };
        spec.l1 = raw.grid.l1.unwrap_or(1.0);
        spec.l2 = raw.grid.l2.unwrap_or(1.0);
        if let Some(a) = raw.alpha {
            spec.alphas = nonempty("alpha", a.into_vec())?;
        }
        if let Some(t) = raw.theta {
            spec.thetas = nonempty("theta", t.into_vec())?;
        }
        if let Some(s) = raw.steps {
            spec.steps = nonempty("steps", s.into_vec())?;
        }
        if let Some(t) = raw.solver.tol {
            spec.tol = t;
        }
        if let Some(k) = raw.solver.kind {
            spec.solver = SolverKind::parse(&k)?;
        }
        if let Some(r) = raw.delta.rule {
            spec.delta_rule = DeltaRule::parse(&r)?;
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Checks every run of the sweep without executing it.
    pub fn validate(&self) -> Result<()> {
        for run in self.runs()? {
            match run.scheme {
                SchemeKind::TwoLevel => {
                    run.scheme_config()?;
                }
                SchemeKind::Splitting => {
                    if !(run.sigma1 >= 0.0 && run.sigma2 >= 0.0) {
                        return Err(Error::InvalidParameter("weights must be nonnegative".into()));
                    }
                    if !(run.alpha > 0.0 && run.alpha <= 1.0 && run.theta > 0.0 && run.theta <= 1.0) {
                        return Err(Error::InvalidParameter(format!(
                            "alpha and theta must lie in (0, 1], got {} and {}",
                            run.alpha, run.theta
                        )));
                    }
                    if run.steps == 0 {
                        return Err(Error::InvalidParameter("steps must be positive".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of runs in the sweep.
    pub fn len(&self) -> usize {
        let s2 = match self.scheme {
            SchemeKind::TwoLevel => 1,
            SchemeKind::Splitting => self.sigma2.len(),
        };
        self.grids.len() * self.alphas.len() * self.thetas.len() * self.sigma1.len() * s2 * self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_single(&self) -> bool {
        self.len() == 1
    }

    /// All runs, ordered by grid, alpha, theta, sigma1, sigma2, steps.
    pub fn runs(&self) -> Result<Vec<RunSpec>> {
        let mut out = Vec::with_capacity(self.len());
        let sigma2: Vec<Option<f64>> = match self.scheme {
            SchemeKind::TwoLevel => vec![None],
            SchemeKind::Splitting => self.sigma2.iter().copied().map(Some).collect(),
        };
        for &(n1, n2) in &self.grids {
            let grid = Grid2D::new(self.l1, self.l2, n1, n2)?;
            for &alpha in &self.alphas {
                for &theta in &self.thetas {
                    for &s1 in &self.sigma1 {
                        for s2 in &sigma2 {
                            for &steps in &self.steps {
                                let base = match s2 {
                                    None => RunSpec::two_level(grid, alpha, theta, s1, steps),
                                    Some(s2) => RunSpec::splitting(grid, alpha, theta, s1, *s2, steps),
                                };
                                out.push(RunSpec {
                                    tol: self.tol,
                                    delta_rule: self.delta_rule,
                                    solver: self.solver,
                                    ..base
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}
