//! Direction-wise second-difference operators with Dirichlet conditions.
//!
//! For `-div(k grad u) + c u` the 2-D operator is assembled as `A = A1 + A2`,
//! where `Ai` is a three-point stencil along direction `i`:
//!
//! ```text
//! (Ai y)(x) = [ -k(x - h/2) y(x - h) + (k(x - h/2) + k(x + h/2)) y(x) - k(x + h/2) y(x + h) ] / h^2
//!             + c(x)/2 y(x)
//! ```
//!
//! Neighbours outside the domain are zero, so boundary-adjacent rows keep the
//! boundary-side `k` on the diagonal and drop the coupling. Each direction
//! carries half of the reaction term so that `A1 + A2` contains `c` once.

use crate::error::{Error, Result};
use crate::grid::{Grid2D, GridFunction};
use std::f64::consts::PI;

/// A linear operator acting on grid functions of a fixed grid.
pub trait GridOperator {
    fn grid(&self) -> &Grid2D;

    fn apply_into(&self, y: &GridFunction, out: &mut GridFunction) -> Result<()>;

    fn apply(&self, y: &GridFunction) -> Result<GridFunction> {
        let mut out = GridFunction::zeros(*self.grid());
        self.apply_into(y, &mut out)?;
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    X1,
    X2,
}

impl Direction {
    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            1 => Ok(Direction::X1),
            2 => Ok(Direction::X2),
            other => Err(Error::InvalidDirection(other)),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Direction::X1 => 1,
            Direction::X2 => 2,
        }
    }
}

/// Coefficients `k`, `c` sampled where the stencils need them.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientField {
    grid: Grid2D,
    /// `k` at direction-1 midpoints `((i1 - 1/2) h1, i2 h2)`, `i1 = 1..=N1`,
    /// interior `i2`; index `(i2 - 1) * N1 + (i1 - 1)`.
    k_mid1: Vec<f64>,
    /// `k` at direction-2 midpoints `(i1 h1, (i2 - 1/2) h2)`, `i2 = 1..=N2`,
    /// interior `i1`; index `(i2 - 1) * (N1 - 1) + (i1 - 1)`.
    k_mid2: Vec<f64>,
    c_node: Vec<f64>,
    k1_lower: f64,
}

impl CoefficientField {
    /// `k` and `c` constant over the domain.
    pub fn constant(grid: Grid2D, k: f64, c: f64) -> Result<Self> {
        Self::from_fns(grid, |_, _| k, |_, _| c, k)
    }

    /// `k(x) = 1`, `c(x) = 0`.
    pub fn laplacian(grid: Grid2D) -> Self {
        Self::constant(grid, 1.0, 0.0).expect("unit coefficients are valid")
    }

    /// Samples `k` at edge midpoints and `c` at nodes. `k1_lower` must be a
    /// lower bound of every `k` sample.
    pub fn from_fns(
        grid: Grid2D,
        k: impl Fn(f64, f64) -> f64,
        c: impl Fn(f64, f64) -> f64,
        k1_lower: f64,
    ) -> Result<Self> {
        if !(k1_lower > 0.0 && k1_lower.is_finite()) {
            return Err(Error::InvalidCoefficients(format!(
                "k lower bound must be positive, got {k1_lower}"
            )));
        }
        let (h1, h2) = (grid.h1(), grid.h2());
        let mut k_mid1 = Vec::with_capacity(grid.n1() * grid.m2());
        for i2 in 1..grid.n2() {
            for i1 in 1..=grid.n1() {
                k_mid1.push(k((i1 as f64 - 0.5) * h1, i2 as f64 * h2));
            }
        }
        let mut k_mid2 = Vec::with_capacity(grid.m1() * grid.n2());
        for i2 in 1..=grid.n2() {
            for i1 in 1..grid.n1() {
                k_mid2.push(k(i1 as f64 * h1, (i2 as f64 - 0.5) * h2));
            }
        }
        let c_node: Vec<f64> = grid
            .nodes()
            .map(|(i1, i2)| c(i1 as f64 * h1, i2 as f64 * h2))
            .collect();
        if let Some(bad) = k_mid1
            .iter()
            .chain(&k_mid2)
            .find(|v| !(v.is_finite() && **v >= k1_lower))
        {
            return Err(Error::InvalidCoefficients(format!(
                "k sample {bad} below the lower bound {k1_lower}"
            )));
        }
        if let Some(bad) = c_node.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidCoefficients(format!(
                "c sample {bad} is negative"
            )));
        }
        Ok(Self {
            grid,
            k_mid1,
            k_mid2,
            c_node,
            k1_lower,
        })
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn k_lower(&self) -> f64 {
        self.k1_lower
    }

    fn k1_at(&self, mid_i1: usize, i2: usize) -> f64 {
        self.k_mid1[(i2 - 1) * self.grid.n1() + (mid_i1 - 1)]
    }

    fn k2_at(&self, i1: usize, mid_i2: usize) -> f64 {
        self.k_mid2[(mid_i2 - 1) * self.grid.m1() + (i1 - 1)]
    }
}

/// Which value of `N_k` enters the closed-form bound `(4/h^2) sin^2(pi / (2 N_k))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaRule {
    /// `N_k` subdivisions. Equals the smallest eigenvalue of the 1-D
    /// Dirichlet Laplacian, so it is a certified bound `A_k >= delta_k I`.
    #[default]
    Certified,
    /// `N_k - 1` in place of `N_k` with the same `h_k`. About `2/N_k` larger
    /// than the smallest eigenvalue, hence not a lower bound. This is the
    /// convention under which the published reference tables for the
    /// two-level scheme are reproduced digit for digit.
    InteriorCount,
}

impl DeltaRule {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "certified" => Ok(DeltaRule::Certified),
            "interior-count" => Ok(DeltaRule::InteriorCount),
            other => Err(Error::Config(format!(
                "unknown delta rule {other:?} (expected \"certified\" or \"interior-count\")"
            ))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DeltaRule::Certified => "certified",
            DeltaRule::InteriorCount => "interior-count",
        }
    }
}

/// Lower bound `delta_k` of `A_k` in direction `dir`.
pub fn spectral_lower_bound(grid: &Grid2D, coeff: &CoefficientField, dir: Direction) -> f64 {
    spectral_lower_bound_with(grid, coeff, dir, DeltaRule::Certified)
}

pub fn spectral_lower_bound_with(
    grid: &Grid2D,
    coeff: &CoefficientField,
    dir: Direction,
    rule: DeltaRule,
) -> f64 {
    let (h, n) = match dir {
        Direction::X1 => (grid.h1(), grid.n1()),
        Direction::X2 => (grid.h2(), grid.n2()),
    };
    let n_eff = match rule {
        DeltaRule::Certified => n as f64,
        DeltaRule::InteriorCount => (n - 1) as f64,
    };
    let s = (PI / (2.0 * n_eff)).sin();
    coeff.k_lower() * 4.0 / (h * h) * s * s
}

/// The pair `(delta_1, delta_2)`; `delta = delta_1 + delta_2` bounds `A` from below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralBounds {
    pub delta1: f64,
    pub delta2: f64,
}

impl SpectralBounds {
    pub fn compute(coeff: &CoefficientField, rule: DeltaRule) -> Self {
        let g = coeff.grid();
        Self {
            delta1: spectral_lower_bound_with(g, coeff, Direction::X1, rule),
            delta2: spectral_lower_bound_with(g, coeff, Direction::X2, rule),
        }
    }

    pub fn total(&self) -> f64 {
        self.delta1 + self.delta2
    }

    pub fn get(&self, dir: Direction) -> f64 {
        match dir {
            Direction::X1 => self.delta1,
            Direction::X2 => self.delta2,
        }
    }
}

/// Tridiagonal stencil operator along one direction, optionally shifted:
/// `apply(y) = (T - shift I) y`.
///
/// Coefficients are stored per node in grid storage order. `lower[j]`
/// couples node `j` to its predecessor on the line and is zero on the first
/// node of every line; likewise `upper[j]` on the last.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitOperator {
    grid: Grid2D,
    direction: Direction,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    shift: f64,
}

/// One line of a [`SplitOperator`]: `len` nodes starting at `start`, `stride` apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Line {
    pub start: usize,
    pub stride: usize,
    pub len: usize,
}

impl Line {
    #[inline]
    pub fn node(&self, j: usize) -> usize {
        self.start + j * self.stride
    }
}

pub fn assemble_direction_operator(
    grid: &Grid2D,
    coeff: &CoefficientField,
    direction: usize,
) -> Result<SplitOperator> {
    let dir = Direction::from_index(direction)?;
    if coeff.grid() != grid {
        return Err(Error::GridMismatch);
    }
    Ok(SplitOperator::assemble(coeff, dir))
}

impl SplitOperator {
    pub fn assemble(coeff: &CoefficientField, direction: Direction) -> Self {
        let grid = *coeff.grid();
        let m = grid.len();
        let mut lower = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut upper = vec![0.0; m];
        for (i1, i2) in grid.nodes() {
            let j = grid.index(i1, i2);
            let (k_minus, k_plus, h, first, last) = match direction {
                Direction::X1 => (
                    coeff.k1_at(i1, i2),
                    coeff.k1_at(i1 + 1, i2),
                    grid.h1(),
                    i1 == 1,
                    i1 == grid.m1(),
                ),
                Direction::X2 => (
                    coeff.k2_at(i1, i2),
                    coeff.k2_at(i1, i2 + 1),
                    grid.h2(),
                    i2 == 1,
                    i2 == grid.m2(),
                ),
            };
            let inv_h2 = 1.0 / (h * h);
            diag[j] = (k_minus + k_plus) * inv_h2 + 0.5 * coeff.c_node[j];
            if !first {
                lower[j] = -k_minus * inv_h2;
            }
            if !last {
                upper[j] = -k_plus * inv_h2;
            }
        }
        Self {
            grid,
            direction,
            lower,
            diag,
            upper,
            shift: 0.0,
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// Same stencil with `chi` subtracted from the diagonal.
    pub fn make_shifted(&self, chi: f64) -> Self {
        Self {
            shift: self.shift + chi,
            ..self.clone()
        }
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Unshifted diagonal.
    pub fn raw_diag(&self) -> &[f64] {
        &self.diag
    }

    /// Diagonal entry of node `j`, shift included.
    #[inline]
    pub fn diag_at(&self, j: usize) -> f64 {
        self.diag[j] - self.shift
    }

    pub fn stride(&self) -> usize {
        match self.direction {
            Direction::X1 => 1,
            Direction::X2 => self.grid.m1(),
        }
    }

    pub fn line_count(&self) -> usize {
        match self.direction {
            Direction::X1 => self.grid.m2(),
            Direction::X2 => self.grid.m1(),
        }
    }

    pub fn line(&self, idx: usize) -> Line {
        match self.direction {
            Direction::X1 => Line {
                start: idx * self.grid.m1(),
                stride: 1,
                len: self.grid.m1(),
            },
            Direction::X2 => Line {
                start: idx,
                stride: self.grid.m1(),
                len: self.grid.m2(),
            },
        }
    }

    pub fn lines(&self) -> impl Iterator<Item = Line> + '_ {
        (0..self.line_count()).map(move |i| self.line(i))
    }

    /// True when every line carries the same tridiagonal matrix.
    pub fn lines_identical(&self) -> bool {
        let first = self.line(0);
        self.lines().skip(1).all(|l| {
            (0..l.len).all(|j| {
                let (a, b) = (first.node(j), l.node(j));
                self.lower[a] == self.lower[b]
                    && self.diag[a] == self.diag[b]
                    && self.upper[a] == self.upper[b]
            })
        })
    }

    /// Dense matrix of line `idx` (including the shift), row-major.
    pub fn line_matrix(&self, idx: usize) -> Vec<Vec<f64>> {
        let l = self.line(idx);
        let mut m = vec![vec![0.0; l.len]; l.len];
        for j in 0..l.len {
            let node = l.node(j);
            m[j][j] = self.diag_at(node);
            if j > 0 {
                m[j][j - 1] = self.lower[node];
            }
            if j + 1 < l.len {
                m[j][j + 1] = self.upper[node];
            }
        }
        m
    }

    /// `out = (T - shift I) y`, accumulated into `out` with weight `w`.
    pub(crate) fn accumulate(&self, w: f64, y: &[f64], out: &mut [f64]) {
        let s = self.stride();
        let m = y.len();
        for j in 0..m {
            let mut v = self.diag_at(j) * y[j];
            if self.lower[j] != 0.0 {
                v += self.lower[j] * y[j - s];
            }
            if self.upper[j] != 0.0 && j + s < m {
                v += self.upper[j] * y[j + s];
            }
            out[j] += w * v;
        }
    }
}

impl GridOperator for SplitOperator {
    fn grid(&self) -> &Grid2D {
        &self.grid
    }

    fn apply_into(&self, y: &GridFunction, out: &mut GridFunction) -> Result<()> {
        if *y.grid() != self.grid || *out.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        let dst = out.values_mut();
        dst.iter_mut().for_each(|v| *v = 0.0);
        self.accumulate(1.0, y.values(), dst);
        Ok(())
    }
}

/// `A1 + A2 - shift I`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullOperator {
    a1: SplitOperator,
    a2: SplitOperator,
    shift: f64,
}

impl FullOperator {
    pub fn new(a1: SplitOperator, a2: SplitOperator, shift: f64) -> Result<Self> {
        if a1.grid != a2.grid {
            return Err(Error::GridMismatch);
        }
        if a1.direction != Direction::X1 || a2.direction != Direction::X2 {
            return Err(Error::InvalidParameter(
                "full operator expects (direction 1, direction 2) components".into(),
            ));
        }
        Ok(Self { a1, a2, shift })
    }

    pub fn assemble(coeff: &CoefficientField) -> Self {
        Self {
            a1: SplitOperator::assemble(coeff, Direction::X1),
            a2: SplitOperator::assemble(coeff, Direction::X2),
            shift: 0.0,
        }
    }

    /// Same operator with an additional `s` subtracted from the diagonal.
    pub fn shifted(&self, s: f64) -> Self {
        Self {
            shift: self.shift + s,
            ..self.clone()
        }
    }

    pub fn a1(&self) -> &SplitOperator {
        &self.a1
    }

    pub fn a2(&self) -> &SplitOperator {
        &self.a2
    }

    pub fn component(&self, dir: Direction) -> &SplitOperator {
        match dir {
            Direction::X1 => &self.a1,
            Direction::X2 => &self.a2,
        }
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// Diagonal of the assembled operator, shifts included.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.a1.grid.len())
            .map(|j| self.a1.diag_at(j) + self.a2.diag_at(j) - self.shift)
            .collect()
    }

    /// Assembled dense matrix (row-major), for small grids only.
    pub fn to_dense(&self) -> Vec<f64> {
        let m = self.a1.grid.len();
        let mut out = vec![0.0; m * m];
        for j in 0..m {
            out[j * m + j] = self.a1.diag_at(j) + self.a2.diag_at(j) - self.shift;
            for op in [&self.a1, &self.a2] {
                let s = op.stride();
                if op.lower[j] != 0.0 {
                    out[j * m + j - s] += op.lower[j];
                }
                if op.upper[j] != 0.0 {
                    out[j * m + j + s] += op.upper[j];
                }
            }
        }
        out
    }

    pub(crate) fn accumulate(&self, w: f64, y: &[f64], out: &mut [f64]) {
        self.a1.accumulate(w, y, out);
        self.a2.accumulate(w, y, out);
        if self.shift != 0.0 {
            for (o, v) in out.iter_mut().zip(y) {
                *o -= w * self.shift * v;
            }
        }
    }
}

impl GridOperator for FullOperator {
    fn grid(&self) -> &Grid2D {
        &self.a1.grid
    }

    fn apply_into(&self, y: &GridFunction, out: &mut GridFunction) -> Result<()> {
        if y.grid() != self.grid() || out.grid() != self.grid() {
            return Err(Error::GridMismatch);
        }
        let dst = out.values_mut();
        dst.iter_mut().for_each(|v| *v = 0.0);
        self.accumulate(1.0, y.values(), dst);
        Ok(())
    }
}

/// Everything the time integrators need about the spatial problem.
#[derive(Debug, Clone)]
pub struct Discretization {
    coeff: CoefficientField,
    operator: FullOperator,
    bounds: SpectralBounds,
}

impl Discretization {
    pub fn new(coeff: CoefficientField, rule: DeltaRule) -> Self {
        let operator = FullOperator::assemble(&coeff);
        let bounds = SpectralBounds::compute(&coeff, rule);
        Self {
            coeff,
            operator,
            bounds,
        }
    }

    pub fn grid(&self) -> &Grid2D {
        self.coeff.grid()
    }

    pub fn coefficients(&self) -> &CoefficientField {
        &self.coeff
    }

    /// The unshifted operator `A = A1 + A2`.
    pub fn operator(&self) -> &FullOperator {
        &self.operator
    }

    pub fn bounds(&self) -> SpectralBounds {
        self.bounds
    }

    pub fn delta(&self) -> f64 {
        self.bounds.total()
    }

    /// `D = A - theta delta I`.
    pub fn shifted_operator(&self, theta: f64) -> FullOperator {
        self.operator.shifted(theta * self.delta())
    }

    /// `D_i = A_i - theta delta_i I`, `i = 1, 2`.
    pub fn shifted_components(&self, theta: f64) -> Vec<SplitOperator> {
        [Direction::X1, Direction::X2]
            .into_iter()
            .map(|d| {
                self.operator
                    .component(d)
                    .make_shifted(theta * self.bounds.get(d))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::inner_product;

    fn laplace(n: usize) -> (Grid2D, CoefficientField) {
        let g = Grid2D::unit_square(n).unwrap();
        (g, CoefficientField::laplacian(g))
    }

    #[test]
    fn invalid_direction() {
        let (g, c) = laplace(4);
        assert!(matches!(
            assemble_direction_operator(&g, &c, 3),
            Err(Error::InvalidDirection(3))
        ));
        assert!(assemble_direction_operator(&g, &c, 0).is_err());
    }

    #[test]
    fn stencil_on_constant_line() {
        // h = 0.25: [-1, 2, -1] / h^2 applied to (1, 1, 1) with zero boundary
        let (g, c) = laplace(4);
        let a1 = assemble_direction_operator(&g, &c, 1).unwrap();
        let y = GridFunction::constant(g, 1.0);
        let out = a1.apply(&y).unwrap();
        for i2 in 1..4 {
            assert_eq!(out.at(1, i2), 16.0);
            assert_eq!(out.at(2, i2), 0.0);
            assert_eq!(out.at(3, i2), 16.0);
        }
        let a2 = assemble_direction_operator(&g, &c, 2).unwrap();
        let out2 = a2.apply(&y).unwrap();
        assert_eq!(out2.at(2, 1), 16.0);
        assert_eq!(out2.at(2, 2), 0.0);
        assert!(a1
            .apply(&GridFunction::zeros(g))
            .unwrap()
            .values()
            .iter()
            .all(|v| *v == 0.0));
    }

    #[test]
    fn sine_is_eigenvector_of_a1() {
        let g = Grid2D::new(1.0, 1.0, 12, 7).unwrap();
        let c = CoefficientField::laplacian(g);
        let a1 = SplitOperator::assemble(&c, Direction::X1);
        let h = g.h1();
        for m in 1..12 {
            let y = GridFunction::from_fn(g, |x1, x2| (PI * m as f64 * x1).sin() * (1.0 + x2));
            let lambda = 4.0 / (h * h) * (PI * m as f64 * h / 2.0).sin().powi(2);
            let ay = a1.apply(&y).unwrap();
            let err = ay.sub(&y.scaled(lambda)).unwrap().max_abs();
            assert!(err <= 1e-10 * lambda * y.max_abs(), "mode {m}: {err}");
            // shifted: eigenvalue drops by chi
            let d1 = a1.make_shifted(3.5);
            let dy = d1.apply(&y).unwrap();
            let err = dy.sub(&y.scaled(lambda - 3.5)).unwrap().max_abs();
            assert!(err <= 1e-10 * lambda * y.max_abs());
        }
    }

    #[test]
    fn bound_values() {
        let (g, c) = laplace(2);
        assert!((spectral_lower_bound(&g, &c, Direction::X1) - 8.0).abs() < 1e-12);
        let (g, c) = laplace(100);
        // direct evaluation of 4/h^2 sin^2(pi/(2N))
        let oracle = 40000.0 * (PI / 200.0).sin().powi(2);
        let d = spectral_lower_bound(&g, &c, Direction::X2);
        assert!((d - oracle).abs() < 1e-12);
        assert!((d - 9.8688).abs() < 1e-4);
        // small-angle limit from below
        let (g, c) = laplace(4000);
        let d = spectral_lower_bound(&g, &c, Direction::X1);
        assert!(d < PI * PI && PI * PI - d < 1e-5);
        let ic = spectral_lower_bound_with(&g, &c, Direction::X1, DeltaRule::InteriorCount);
        assert!(ic > d);
    }

    #[test]
    fn bound_scales_with_k_lower() {
        let g = Grid2D::unit_square(10).unwrap();
        let c = CoefficientField::from_fns(g, |x, _| 2.0 + x, |_, _| 1.0, 2.0).unwrap();
        let lap = CoefficientField::laplacian(g);
        let a = spectral_lower_bound(&g, &c, Direction::X1);
        let b = spectral_lower_bound(&g, &lap, Direction::X1);
        assert!((a - 2.0 * b).abs() < 1e-12);
    }

    #[test]
    fn coefficient_validation() {
        let g = Grid2D::unit_square(5).unwrap();
        assert!(CoefficientField::from_fns(g, |_, _| 1.0, |_, _| 0.0, 0.0).is_err());
        assert!(CoefficientField::from_fns(g, |x, _| x, |_, _| 0.0, 0.5).is_err());
        assert!(CoefficientField::from_fns(g, |_, _| 1.0, |_, _| -1.0, 1.0).is_err());
    }

    #[test]
    fn lines_are_symmetric_and_dominant() {
        let g = Grid2D::new(2.0, 1.0, 9, 6).unwrap();
        let c = CoefficientField::from_fns(
            g,
            |x1, x2| 1.0 + x1 * x2,
            |x1, _| x1,
            1.0,
        )
        .unwrap();
        for dir in [Direction::X1, Direction::X2] {
            let op = SplitOperator::assemble(&c, dir);
            for idx in 0..op.line_count() {
                let m = op.line_matrix(idx);
                for i in 0..m.len() {
                    let off: f64 = (0..m.len()).filter(|&j| j != i).map(|j| m[i][j].abs()).sum();
                    assert!(m[i][i] > 0.0 && m[i][i] > off);
                    for j in 0..m.len() {
                        assert_eq!(m[i][j], m[j][i]);
                    }
                }
            }
        }
    }

    #[test]
    fn full_operator_is_sum_of_parts() {
        let g = Grid2D::new(1.0, 1.5, 7, 9).unwrap();
        let c = CoefficientField::from_fns(g, |x1, x2| 1.0 + x1 + x2 * x2, |_, x2| x2, 1.0).unwrap();
        let a = FullOperator::assemble(&c).shifted(0.7);
        let y = GridFunction::from_fn(g, |x1, x2| (3.0 * x1).sin() + x2 * x2);
        let lhs = a.apply(&y).unwrap();
        let mut rhs = a.a1().apply(&y).unwrap();
        rhs.axpy(1.0, &a.a2().apply(&y).unwrap()).unwrap();
        rhs.axpy(-0.7, &y).unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-12);
        // dense assembly agrees with apply
        let dense = a.to_dense();
        let m = g.len();
        for i in 0..m {
            let v: f64 = (0..m).map(|j| dense[i * m + j] * y.values()[j]).sum();
            assert!((v - lhs.values()[i]).abs() < 1e-9);
        }
        // symmetric stencil
        let w = GridFunction::from_fn(g, |x1, x2| x1 * (1.0 - x2));
        let l = inner_product(&a.apply(&y).unwrap(), &w).unwrap();
        let r = inner_product(&y, &a.apply(&w).unwrap()).unwrap();
        assert!((l - r).abs() < 1e-12 * l.abs().max(1.0));
    }

    #[test]
    fn c_term_is_split_evenly() {
        let g = Grid2D::unit_square(6).unwrap();
        let c = CoefficientField::constant(g, 1.0, 4.0).unwrap();
        let lap = CoefficientField::laplacian(g);
        let a = FullOperator::assemble(&c);
        let b = FullOperator::assemble(&lap);
        let y = GridFunction::from_fn(g, |x1, x2| x1 + x2);
        let diff = a.apply(&y).unwrap().sub(&b.apply(&y).unwrap()).unwrap();
        let expected = y.scaled(4.0);
        assert!(diff.sub(&expected).unwrap().max_abs() < 1e-12);
    }
}
