//! Vector additive scheme.
//!
//! The operator is split as `D = D_1 + ... + D_p` with `D_i = A_i - theta delta_i I`
//! and `p` copies `y_i` of the solution are advanced together. Each copy treats
//! its own `D_i` implicitly, so one step costs `p` batches of tridiagonal line
//! solves. For component `k` and step `n >= 1`, `t = n tau`:
//!
//! ```text
//! [theta delta I + (s1 t + s2 tau alpha) D_k] y_k^{n+1}
//!     = theta delta y_k + s1 t D_k y_k - (1 - s1) t D_k (y_k - y_k^-)
//!       - t sum_{j != k} D_j (y_j - y_j^-)
//!       - tau alpha (1 - s2) D_k y_k - tau alpha sum_{j != k} D_j y_j
//! ```
//!
//! where `y = y^n` and `y^- = y^{n-1}`. Level 1 comes from one explicit step
//! with the full operator.

use crate::error::{Error, Result};
use crate::grid::{inner_product, GridFunction};
use crate::linsolve::{thomas_solve_lines, ShiftedLineSystem};
use crate::operators::{Discretization, FullOperator, GridOperator, SplitOperator};

#[derive(Debug, Clone)]
pub struct SplittingSetup {
    alpha: f64,
    theta: f64,
    sigma1: f64,
    sigma2: f64,
    steps: usize,
    delta: f64,
    deltas: Vec<f64>,
    components: Vec<SplitOperator>,
    full: FullOperator,
}

impl SplittingSetup {
    pub fn new(
        disc: &Discretization,
        alpha: f64,
        theta: f64,
        sigma1: f64,
        sigma2: f64,
        steps: usize,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(alpha > 0.0 && alpha <= 1.0) {
            return bad(format!("alpha must lie in (0, 1], got {alpha}"));
        }
        if !(theta > 0.0 && theta <= 1.0) {
            return bad(format!("theta must lie in (0, 1], got {theta}"));
        }
        if !(sigma1.is_finite() && sigma2.is_finite() && sigma1 >= 0.0 && sigma2 >= 0.0) {
            return bad(format!("weights must be nonnegative, got {sigma1}, {sigma2}"));
        }
        if steps == 0 {
            return bad("at least one time step is required".into());
        }
        let bounds = disc.bounds();
        let deltas = vec![bounds.delta1, bounds.delta2];
        let delta = disc.delta();
        let chi_sum: f64 = deltas.iter().map(|d| theta * d).sum();
        if (chi_sum - theta * delta).abs() > 1e-14 * theta * delta {
            return bad(format!("component shifts sum to {chi_sum}, expected {}", theta * delta));
        }
        let setup = Self {
            alpha,
            theta,
            sigma1,
            sigma2,
            steps,
            delta,
            deltas,
            components: disc.shifted_components(theta),
            full: disc.shifted_operator(theta),
        };
        if !setup.is_stable() {
            log::warn!(
                "weights sigma1 = {sigma1}, sigma2 = {sigma2} are below p/2 = {}; no energy estimate",
                setup.p() as f64 / 2.0
            );
        }
        Ok(setup)
    }

    pub fn p(&self) -> usize {
        self.components.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn sigma1(&self) -> f64 {
        self.sigma1
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn tau(&self) -> f64 {
        1.0 / self.steps as f64
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn theta_delta(&self) -> f64 {
        self.theta * self.delta
    }

    /// Shift `chi_i = theta delta_i` of component `i` (0-based).
    pub fn chi(&self, i: usize) -> f64 {
        self.theta * self.deltas[i]
    }

    /// `D_i`, 0-based.
    pub fn components(&self) -> &[SplitOperator] {
        &self.components
    }

    /// `D = sum D_i`.
    pub fn full_operator(&self) -> &FullOperator {
        &self.full
    }

    /// `2 sigma1 >= p` and `2 sigma2 >= p`.
    pub fn is_stable(&self) -> bool {
        let p = self.p() as f64;
        2.0 * self.sigma1 >= p && 2.0 * self.sigma2 >= p
    }
}

/// Components at levels `n` and `n - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorState {
    pub current: Vec<GridFunction>,
    pub previous: Vec<GridFunction>,
    /// Level index `n` of `current`.
    pub step: usize,
}

impl VectorState {
    /// Level 0: every component equal to `y0`.
    pub fn initial(y0: &GridFunction, p: usize) -> Self {
        Self {
            current: vec![y0.clone(); p],
            previous: vec![y0.clone(); p],
            step: 0,
        }
    }

    pub fn p(&self) -> usize {
        self.current.len()
    }

    pub fn component(&self, i: usize) -> &GridFunction {
        &self.current[i]
    }
}

/// Explicit start `y_i^1 = y^0 - (tau alpha / (theta delta)) D y^0`.
pub fn first_step(y0: &GridFunction, setup: &SplittingSetup) -> Result<VectorState> {
    let mut y1 = setup.full.apply(y0)?.scaled(-setup.tau() * setup.alpha / setup.theta_delta());
    y1.axpy(1.0, y0)?;
    Ok(VectorState {
        current: vec![y1; setup.p()],
        previous: vec![y0.clone(); setup.p()],
        step: 1,
    })
}

/// Advances from level `n = state.step >= 1` to `n + 1`.
pub fn splitting_step(state: &VectorState, setup: &SplittingSetup) -> Result<VectorState> {
    let p = setup.p();
    if state.p() != p || state.previous.len() != p {
        return Err(Error::InvalidParameter(format!(
            "state has {} components, setup has {p}",
            state.p()
        )));
    }
    if state.step == 0 || state.step >= setup.steps {
        return Err(Error::InvalidParameter(format!(
            "splitting step needs level 1..{}, got {}",
            setup.steps - 1,
            state.step
        )));
    }
    let tau = setup.tau();
    let t = state.step as f64 * tau;
    let (s1, s2, alpha, td) = (setup.sigma1, setup.sigma2, setup.alpha, setup.theta_delta());

    let mut dy = Vec::with_capacity(p);
    let mut ddiff = Vec::with_capacity(p);
    for (j, d) in setup.components.iter().enumerate() {
        dy.push(d.apply(&state.current[j])?);
        ddiff.push(d.apply(&state.current[j].sub(&state.previous[j])?)?);
    }
    let grid = *state.current[0].grid();
    let mut sum_dy = GridFunction::zeros(grid);
    let mut sum_ddiff = GridFunction::zeros(grid);
    for j in 0..p {
        sum_dy.axpy(1.0, &dy[j])?;
        sum_ddiff.axpy(1.0, &ddiff[j])?;
    }

    let mut next = Vec::with_capacity(p);
    for k in 0..p {
        let mut rhs = state.current[k].scaled(td);
        // own component
        rhs.axpy(s1 * t - tau * alpha * (1.0 - s2), &dy[k])?;
        rhs.axpy(-(1.0 - s1) * t, &ddiff[k])?;
        // the others: sum over j minus the k-th term
        rhs.axpy(-t, &sum_ddiff)?;
        rhs.axpy(t, &ddiff[k])?;
        rhs.axpy(-tau * alpha, &sum_dy)?;
        rhs.axpy(tau * alpha, &dy[k])?;
        let sys = ShiftedLineSystem::new(&setup.components[k], td, s1 * t + s2 * tau * alpha);
        let y = thomas_solve_lines(&sys, &rhs).map_err(|e| Error::Component {
            component: k + 1,
            source: Box::new(e),
        })?;
        next.push(y);
    }
    Ok(VectorState {
        current: next,
        previous: state.current.clone(),
        step: state.step + 1,
    })
}

fn check_len(v: &[GridFunction], setup: &SplittingSetup) -> Result<()> {
    if v.len() == setup.p() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "expected {} components, got {}",
            setup.p(),
            v.len()
        )))
    }
}

/// `theta delta sum_i (D_i v_i, v_i)`.
pub fn quadratic_form_c(v: &[GridFunction], setup: &SplittingSetup) -> Result<f64> {
    check_len(v, setup)?;
    let mut s = 0.0;
    for (d, vi) in setup.components.iter().zip(v) {
        s += inner_product(&d.apply(vi)?, vi)?;
    }
    Ok(setup.theta_delta() * s)
}

/// `alpha ||sum_j D_j v_j||^2`.
pub fn quadratic_form_a(v: &[GridFunction], setup: &SplittingSetup) -> Result<f64> {
    check_len(v, setup)?;
    let mut sum = GridFunction::zeros(*v[0].grid());
    for (d, vi) in setup.components.iter().zip(v) {
        sum.axpy(1.0, &d.apply(vi)?)?;
    }
    Ok(setup.alpha * inner_product(&sum, &sum)?)
}

/// `alpha sum_i ||D_i v_i||^2`.
pub fn quadratic_form_a0(v: &[GridFunction], setup: &SplittingSetup) -> Result<f64> {
    check_len(v, setup)?;
    let mut s = 0.0;
    for (d, vi) in setup.components.iter().zip(v) {
        let dv = d.apply(vi)?;
        s += inner_product(&dv, &dv)?;
    }
    Ok(setup.alpha * s)
}

/// `||w||^2` in the seminorm `R^n - (tau^2/4) A` of step `n`, where
/// `R^n = (tau/2) C + s1 tau (t/alpha) A0 - (tau/2)(t/alpha) A + s2 (tau^2/2) A0`.
pub fn seminorm(w: &[GridFunction], n: usize, setup: &SplittingSetup) -> Result<f64> {
    let tau = setup.tau();
    let t = n as f64 * tau;
    let a = quadratic_form_a(w, setup)?;
    let a0 = quadratic_form_a0(w, setup)?;
    let c = quadratic_form_c(w, setup)?;
    let ta = t / setup.alpha;
    Ok(0.5 * tau * c + setup.sigma1 * tau * ta * a0 - 0.5 * tau * ta * a
        + setup.sigma2 * 0.5 * tau * tau * a0
        - 0.25 * tau * tau * a)
}

fn combine(a: f64, x: &[GridFunction], b: f64, y: &[GridFunction]) -> Result<Vec<GridFunction>> {
    x.iter()
        .zip(y)
        .map(|(u, v)| GridFunction::lincomb(a, u, b, v))
        .collect()
}

/// `(E_plus, E_minus)` for levels `n + 1`, `n`, `n - 1`, both measured with `R^n`.
pub fn step_energies(
    next: &[GridFunction],
    current: &[GridFunction],
    previous: &[GridFunction],
    n: usize,
    setup: &SplittingSetup,
) -> Result<(f64, f64)> {
    let inv_tau = 1.0 / setup.tau();
    let plus = quadratic_form_a(&combine(0.5, next, 0.5, current)?, setup)?
        + seminorm(&combine(inv_tau, next, -inv_tau, current)?, n, setup)?;
    let minus = quadratic_form_a(&combine(0.5, current, 0.5, previous)?, setup)?
        + seminorm(&combine(inv_tau, current, -inv_tau, previous)?, n, setup)?;
    Ok((plus, minus))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRecord {
    /// Middle level `n`.
    pub step: usize,
    pub e_plus: f64,
    pub e_minus: f64,
}

impl EnergyRecord {
    /// `E_plus <= E_minus (1 + slack)`.
    pub fn holds(&self, slack: f64) -> bool {
        self.e_plus <= self.e_minus * (1.0 + slack)
    }
}

#[derive(Debug, Clone)]
pub struct SplittingRun {
    pub state: VectorState,
    /// One record per three-level step `n = 1..N-1`.
    pub energies: Vec<EnergyRecord>,
}

/// Explicit first step followed by `N - 1` splitting steps.
pub fn run_splitting(f: &GridFunction, setup: &SplittingSetup) -> Result<SplittingRun> {
    run_splitting_with(f, setup, |_| Ok(()))
}

/// As [`run_splitting`], calling `observe` on every state from level 1 on.
pub fn run_splitting_with(
    f: &GridFunction,
    setup: &SplittingSetup,
    mut observe: impl FnMut(&VectorState) -> Result<()>,
) -> Result<SplittingRun> {
    let y0 = crate::evolution::initial_state(f, setup.theta, setup.delta, setup.alpha)?;
    let mut state = first_step(&y0, setup)?;
    observe(&state)?;
    let mut energies = Vec::with_capacity(setup.steps.saturating_sub(1));
    while state.step < setup.steps {
        let next = splitting_step(&state, setup)?;
        let (e_plus, e_minus) =
            step_energies(&next.current, &state.current, &state.previous, state.step, setup)?;
        energies.push(EnergyRecord {
            step: state.step,
            e_plus,
            e_minus,
        });
        state = next;
        observe(&state)?;
    }
    Ok(SplittingRun { state, energies })
}
