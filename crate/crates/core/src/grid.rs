//! Uniform rectangular grids, grid functions and the discrete `L2` inner product.
//!
//! Only interior nodes `x = (i1 h1, i2 h2)`, `1 <= ik <= Nk - 1`, carry values.
//! Boundary values are identically zero and never stored. Values are kept in
//! lexicographic order with `i1` running fastest, so direction-1 grid lines are
//! contiguous in memory.

use crate::error::{Error, Result};
use crate::operators::GridOperator;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    l1: f64,
    l2: f64,
    n1: usize,
    n2: usize,
}

impl Grid2D {
    /// Grid on `(0, l1) x (0, l2)` with `n1 x n2` cells.
    pub fn new(l1: f64, l2: f64, n1: usize, n2: usize) -> Result<Self> {
        if n1 < 2 || n2 < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 subdivisions per direction, got {n1} x {n2}"
            )));
        }
        if !(l1.is_finite() && l2.is_finite() && l1 > 0.0 && l2 > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "edge lengths must be positive, got {l1} x {l2}"
            )));
        }
        Ok(Self { l1, l2, n1, n2 })
    }

    pub fn unit_square(n: usize) -> Result<Self> {
        Self::new(1.0, 1.0, n, n)
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }

    /// Number of subdivisions in direction 1.
    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn h1(&self) -> f64 {
        self.l1 / self.n1 as f64
    }

    pub fn h2(&self) -> f64 {
        self.l2 / self.n2 as f64
    }

    /// Interior node count along direction 1.
    pub fn m1(&self) -> usize {
        self.n1 - 1
    }

    pub fn m2(&self) -> usize {
        self.n2 - 1
    }

    /// Total number of interior nodes `(N1 - 1)(N2 - 1)`.
    pub fn len(&self) -> usize {
        self.m1() * self.m2()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Weight `h1 h2` of one node in the inner product.
    pub fn cell_area(&self) -> f64 {
        self.h1() * self.h2()
    }

    /// Storage index of interior node `(i1, i2)`, both 1-based.
    #[inline]
    pub fn index(&self, i1: usize, i2: usize) -> usize {
        debug_assert!((1..self.n1).contains(&i1) && (1..self.n2).contains(&i2));
        (i2 - 1) * self.m1() + (i1 - 1)
    }

    /// Coordinates of interior node `(i1, i2)`.
    #[inline]
    pub fn node(&self, i1: usize, i2: usize) -> (f64, f64) {
        (i1 as f64 * self.h1(), i2 as f64 * self.h2())
    }

    /// Iterates `(i1, i2)` over interior nodes in storage order.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.n2).flat_map(move |i2| (1..self.n1).map(move |i1| (i1, i2)))
    }
}

/// Real values on the interior nodes of a [`Grid2D`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid2D,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: Grid2D, value: f64) -> Self {
        Self {
            grid,
            values: vec![value; grid.len()],
        }
    }

    pub fn from_values(grid: Grid2D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f(x1, x2)` at every interior node.
    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = grid
            .nodes()
            .map(|(i1, i2)| {
                let (x1, x2) = grid.node(i1, i2);
                f(x1, x2)
            })
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, i1: usize, i2: usize) -> f64 {
        self.values[self.grid.index(i1, i2)]
    }

    pub(crate) fn check_same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    /// `self += a * x`.
    pub fn axpy(&mut self, a: f64, x: &GridFunction) -> Result<()> {
        self.check_same_grid(x)?;
        for (s, v) in self.values.iter_mut().zip(&x.values) {
            *s += a * v;
        }
        Ok(())
    }

    /// `a * x + b * y`.
    pub fn lincomb(a: f64, x: &GridFunction, b: f64, y: &GridFunction) -> Result<Self> {
        x.check_same_grid(y)?;
        Ok(Self {
            grid: x.grid,
            values: x
                .values
                .iter()
                .zip(&y.values)
                .map(|(u, v)| a * u + b * v)
                .collect(),
        })
    }

    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        Self::lincomb(1.0, self, -1.0, other)
    }

    pub fn add(&self, other: &GridFunction) -> Result<Self> {
        Self::lincomb(1.0, self, 1.0, other)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Pairwise summation of `term(i)` over `lo..hi`.
pub(crate) fn pairwise_sum(lo: usize, hi: usize, term: &impl Fn(usize) -> f64) -> f64 {
    const BLOCK: usize = 32;
    if hi - lo <= BLOCK {
        let mut s = 0.0;
        for i in lo..hi {
            s += term(i);
        }
        s
    } else {
        let mid = lo + (hi - lo) / 2;
        pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term)
    }
}

/// Unweighted Euclidean dot product, pairwise-summed.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    pairwise_sum(0, a.len(), &|i| a[i] * b[i])
}

/// `(y, w) = sum over interior nodes of y w h1 h2`.
pub fn inner_product(y: &GridFunction, w: &GridFunction) -> Result<f64> {
    y.check_same_grid(w)?;
    Ok(dot(&y.values, &w.values) * y.grid.cell_area())
}

pub fn norm(y: &GridFunction) -> f64 {
    (dot(&y.values, &y.values) * y.grid.cell_area()).sqrt()
}

/// Relative slack below zero tolerated in a quadratic form before it is
/// treated as a sign of an indefinite operator.
const QUADRATIC_FORM_SLACK: f64 = 1e-12;

/// Energy norm `(A y, y)^{1/2}`.
pub fn norm_energy<A: GridOperator + ?Sized>(y: &GridFunction, op: &A) -> Result<f64> {
    let ay = op.apply(y)?;
    let q = inner_product(&ay, y)?;
    if q >= 0.0 {
        return Ok(q.sqrt());
    }
    let scale = norm(&ay) * norm(y);
    if -q <= QUADRATIC_FORM_SLACK * scale {
        Ok(0.0)
    } else {
        Err(Error::NegativeQuadraticForm(q))
    }
}
