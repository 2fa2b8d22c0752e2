//! Linear solvers for the per-step systems.
//!
//! * [`thomas_solve_lines`]: batch tridiagonal elimination for `(a I + b D_i)`.
//! * [`spd_solve`]: Jacobi-preconditioned conjugate gradients for `(a I + b D)`.
//! * [`SeparableSolver`]: direct solve of `(a I + b D)` when every line of
//!   each direction carries the same matrix (constant coefficients). Direction 1
//!   is diagonalised once, leaving one tridiagonal system per mode.

use crate::error::{Error, Result};
use crate::grid::{dot, Grid2D, GridFunction};
use crate::operators::{FullOperator, GridOperator, Line, SplitOperator};
use nalgebra::{DMatrix, SymmetricEigen};

/// `diag_shift * I + scale * base`, solved line by line.
#[derive(Debug, Clone, Copy)]
pub struct ShiftedLineSystem<'a> {
    pub base: &'a SplitOperator,
    pub diag_shift: f64,
    pub scale: f64,
}

impl<'a> ShiftedLineSystem<'a> {
    pub fn new(base: &'a SplitOperator, diag_shift: f64, scale: f64) -> Self {
        Self {
            base,
            diag_shift,
            scale,
        }
    }
}

impl GridOperator for ShiftedLineSystem<'_> {
    fn grid(&self) -> &Grid2D {
        self.base.grid()
    }

    fn apply_into(&self, y: &GridFunction, out: &mut GridFunction) -> Result<()> {
        self.base.apply_into(y, out)?;
        for (o, v) in out.values_mut().iter_mut().zip(y.values()) {
            *o = self.diag_shift * v + self.scale * *o;
        }
        Ok(())
    }
}

/// Relative pivot magnitude below which elimination is refused.
const PIVOT_TOL: f64 = 1e-14;

/// Solves one tridiagonal system in place. `sub[0]` and `sup[n-1]` are ignored.
pub fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &mut [f64]) -> Option<()> {
    let n = rhs.len();
    let mut c = vec![0.0; n];
    tridiagonal_in_place(n, |j| (sub[j], diag[j], sup[j]), rhs, &mut c)
}

/// Thomas elimination; `coef(j)` returns `(sub, diag, sup)` of row `j`.
fn tridiagonal_in_place(
    n: usize,
    coef: impl Fn(usize) -> (f64, f64, f64),
    x: &mut [f64],
    scratch: &mut [f64],
) -> Option<()> {
    if n == 0 {
        return Some(());
    }
    let (_, b0, c0) = coef(0);
    let scale0 = b0.abs() + c0.abs();
    if !(b0.abs() > PIVOT_TOL * scale0) || !b0.is_finite() {
        return None;
    }
    scratch[0] = c0 / b0;
    x[0] /= b0;
    for j in 1..n {
        let (a, b, c) = coef(j);
        let pivot = b - a * scratch[j - 1];
        let scale = a.abs() + b.abs() + c.abs();
        if !(pivot.abs() > PIVOT_TOL * scale) || !pivot.is_finite() {
            return None;
        }
        scratch[j] = c / pivot;
        x[j] = (x[j] - a * x[j - 1]) / pivot;
    }
    for j in (0..n - 1).rev() {
        x[j] -= scratch[j] * x[j + 1];
    }
    Some(())
}

fn solve_line(
    sys: &ShiftedLineSystem<'_>,
    line: Line,
    src: &[f64],
    dst: &mut [f64],
    buf: &mut [f64],
    scratch: &mut [f64],
) -> Option<()> {
    let base = sys.base;
    for j in 0..line.len {
        buf[j] = src[line.node(j)];
    }
    tridiagonal_in_place(
        line.len,
        |j| {
            let node = line.node(j);
            (
                sys.scale * base.lower()[node],
                sys.diag_shift + sys.scale * base.diag_at(node),
                sys.scale * base.upper()[node],
            )
        },
        &mut buf[..line.len],
        &mut scratch[..line.len],
    )?;
    for j in 0..line.len {
        dst[line.node(j)] = buf[j];
    }
    Some(())
}

/// Solves `(a I + b base) y = rhs` independently on every grid line.
pub fn thomas_solve_lines(sys: &ShiftedLineSystem<'_>, rhs: &GridFunction) -> Result<GridFunction> {
    if rhs.grid() != sys.base.grid() {
        return Err(Error::GridMismatch);
    }
    let mut out = GridFunction::zeros(*rhs.grid());
    let len = sys.base.line(0).len;
    let mut buf = vec![0.0; len];
    let mut scratch = vec![0.0; len];
    let src = rhs.values();
    let dst = out.values_mut();
    for idx in 0..sys.base.line_count() {
        let line = sys.base.line(idx);
        solve_line(sys, line, src, dst, &mut buf, &mut scratch).ok_or(Error::ZeroPivot { line: idx })?;
    }
    Ok(out)
}

/// `diag_shift * I + scale * op` for a full 2-D operator.
#[derive(Debug, Clone, Copy)]
pub struct ShiftedFullSystem<'a> {
    pub op: &'a FullOperator,
    pub diag_shift: f64,
    pub scale: f64,
}

impl<'a> ShiftedFullSystem<'a> {
    pub fn new(op: &'a FullOperator, diag_shift: f64, scale: f64) -> Self {
        Self {
            op,
            diag_shift,
            scale,
        }
    }

    fn apply_raw(&self, y: &[f64], out: &mut [f64]) {
        for (o, v) in out.iter_mut().zip(y) {
            *o = self.diag_shift * v;
        }
        self.op.accumulate(self.scale, y, out);
    }
}

impl GridOperator for ShiftedFullSystem<'_> {
    fn grid(&self) -> &Grid2D {
        self.op.grid()
    }

    fn apply_into(&self, y: &GridFunction, out: &mut GridFunction) -> Result<()> {
        if y.grid() != self.grid() || out.grid() != self.grid() {
            return Err(Error::GridMismatch);
        }
        self.apply_raw(y.values(), out.values_mut());
        Ok(())
    }
}

pub const DEFAULT_CG_TOL: f64 = 1e-12;

/// Conjugate gradients with a zero initial guess.
pub fn spd_solve(sys: &ShiftedFullSystem<'_>, rhs: &GridFunction, tol: f64) -> Result<GridFunction> {
    spd_solve_from(sys, rhs, GridFunction::zeros(*rhs.grid()), tol).map(|(x, _)| x)
}

/// Jacobi-preconditioned conjugate gradients from the initial guess `x0`.
/// Stops when `|r| <= tol |rhs|`; returns the solution and the iteration count.
pub fn spd_solve_from(
    sys: &ShiftedFullSystem<'_>,
    rhs: &GridFunction,
    x0: GridFunction,
    tol: f64,
) -> Result<(GridFunction, usize)> {
    if rhs.grid() != sys.grid() || x0.grid() != sys.grid() {
        return Err(Error::GridMismatch);
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("solver tolerance must be positive, got {tol}")));
    }
    let b = rhs.values();
    let m = b.len();
    let b_norm = dot(b, b).sqrt();
    let mut x = x0;
    if b_norm == 0.0 {
        return Ok((GridFunction::zeros(*rhs.grid()), 0));
    }
    let inv_diag: Vec<f64> = sys
        .op
        .diagonal()
        .iter()
        .map(|d| 1.0 / (sys.diag_shift + sys.scale * d))
        .collect();
    if inv_diag.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::InvalidParameter(
            "shifted system has a non-positive diagonal".into(),
        ));
    }

    let mut r = vec![0.0; m];
    sys.apply_raw(x.values(), &mut r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(a, d)| a * d).collect();
    let mut p = z.clone();
    let mut q = vec![0.0; m];
    let mut rz = dot(&r, &z);
    let max_iter = 10 * m;
    let mut res = dot(&r, &r).sqrt() / b_norm;
    let mut it = 0;
    while res > tol {
        if it == max_iter {
            return Err(Error::NotConverged {
                iterations: it,
                residual: res,
            });
        }
        sys.apply_raw(&p, &mut q);
        let pq = dot(&p, &q);
        if !(pq > 0.0) {
            return Err(Error::NotConverged {
                iterations: it,
                residual: res,
            });
        }
        let step = rz / pq;
        let xv = x.values_mut();
        for i in 0..m {
            xv[i] += step * p[i];
            r[i] -= step * q[i];
        }
        for i in 0..m {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..m {
            p[i] = z[i] + beta * p[i];
        }
        res = dot(&r, &r).sqrt() / b_norm;
        it += 1;
    }
    Ok((x, it))
}

/// Direct solver for `(a I + b (A1 + A2 - s I))` with line-invariant `A1`, `A2`.
#[derive(Debug, Clone)]
pub struct SeparableSolver {
    grid: Grid2D,
    /// Orthonormal eigenvectors of the direction-1 line matrix (columns).
    modes: DMatrix<f64>,
    eigenvalues: Vec<f64>,
    op: FullOperator,
}

impl SeparableSolver {
    pub fn new(op: &FullOperator) -> Result<Self> {
        if !op.a1().lines_identical() {
            return Err(Error::NotSeparable("direction-1 lines differ".into()));
        }
        if !op.a2().lines_identical() {
            return Err(Error::NotSeparable("direction-2 lines differ".into()));
        }
        let grid = *op.grid();
        let rows = op.a1().line_matrix(0);
        let n = rows.len();
        let t = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        let eig = SymmetricEigen::new(t);
        Ok(Self {
            grid,
            modes: eig.eigenvectors,
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            op: op.clone(),
        })
    }

    pub fn operator(&self) -> &FullOperator {
        &self.op
    }

    /// Solves `(diag_shift I + scale * op) y = rhs`.
    pub fn solve(&self, diag_shift: f64, scale: f64, rhs: &GridFunction) -> Result<GridFunction> {
        if rhs.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let (m1, m2) = (self.grid.m1(), self.grid.m2());
        let y = DMatrix::from_column_slice(m1, m2, rhs.values());
        // rows of `coef` are direction-1 modes, columns direction-2 nodes
        let mut coef = self.modes.transpose() * y;
        let a2 = self.op.a2();
        let line = a2.line(0);
        let a = diag_shift - scale * self.op.shift();
        let sub: Vec<f64> = (0..m2).map(|j| scale * a2.lower()[line.node(j)]).collect();
        let sup: Vec<f64> = (0..m2).map(|j| scale * a2.upper()[line.node(j)]).collect();
        let base_diag: Vec<f64> = (0..m2).map(|j| scale * a2.diag_at(line.node(j))).collect();
        let mut diag = vec![0.0; m2];
        let mut x = vec![0.0; m2];
        for (mode, mu) in self.eigenvalues.iter().enumerate() {
            for j in 0..m2 {
                diag[j] = a + scale * mu + base_diag[j];
                x[j] = coef[(mode, j)];
            }
            solve_tridiagonal(&sub, &diag, &sup, &mut x).ok_or(Error::ZeroPivot { line: mode })?;
            for j in 0..m2 {
                coef[(mode, j)] = x[j];
            }
        }
        let out = &self.modes * coef;
        GridFunction::from_values(self.grid, out.as_slice().to_vec())
    }
}
