//! Eigenpairs of the discrete operator and functions of it.
//!
//! Eigenvectors are normalised in the grid norm. Internally they are kept as
//! Euclidean-orthonormal vectors `v`, with `phi = v / sqrt(h1 h2)`, so that a
//! spectral function `g(A) y = V diag(g) V^T y` needs no extra weights.

use crate::error::{Error, Result};
use crate::grid::{Grid2D, GridFunction};
use crate::operators::{FullOperator, GridOperator};
use nalgebra::{DMatrix, SymmetricEigen};
use std::f64::consts::PI;

/// Largest operator handed to the dense eigensolver.
pub const DENSE_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    DenseNumeric,
}

#[derive(Debug, Clone)]
enum Repr {
    /// `A = T1 (x) I + I (x) T2` with line eigenbases `v1` (m1 x m1), `v2` (m2 x m2).
    Separable {
        lam1: Vec<f64>,
        lam2: Vec<f64>,
        v1: DMatrix<f64>,
        v2: DMatrix<f64>,
    },
    Dense {
        vectors: DMatrix<f64>,
    },
}

#[derive(Debug, Clone)]
pub struct EigenBasis {
    grid: Grid2D,
    provenance: Provenance,
    repr: Repr,
    /// All eigenvalues, ascending.
    eigenvalues: Vec<f64>,
    /// For separable bases, `(k1, k2)` (0-based) of each entry of `eigenvalues`.
    order: Vec<(usize, usize)>,
}

/// Euclidean-orthonormal sine vectors `sqrt(2/N) sin(pi m i / N)` as columns.
fn sine_matrix(n: usize) -> DMatrix<f64> {
    let m = n - 1;
    let s = (2.0 / n as f64).sqrt();
    DMatrix::from_fn(m, m, |i, k| {
        s * (PI * ((k + 1) * (i + 1)) as f64 / n as f64).sin()
    })
}

fn line_eigenvalues(h: f64, n: usize) -> Vec<f64> {
    (1..n)
        .map(|m| 4.0 / (h * h) * (PI * m as f64 / (2.0 * n as f64)).sin().powi(2))
        .collect()
}

/// Eigenbasis of the Dirichlet Laplacian (`k = 1`, `c = 0`) in closed form.
pub fn analytic_laplacian_basis(grid: &Grid2D) -> EigenBasis {
    let lam1 = line_eigenvalues(grid.h1(), grid.n1());
    let lam2 = line_eigenvalues(grid.h2(), grid.n2());
    EigenBasis::separable(
        *grid,
        Provenance::Analytic,
        lam1,
        lam2,
        sine_matrix(grid.n1()),
        sine_matrix(grid.n2()),
    )
}

/// Full symmetric eigendecomposition of the assembled operator.
pub fn dense_basis(op: &FullOperator) -> Result<EigenBasis> {
    let grid = *op.grid();
    let m = grid.len();
    if m > DENSE_LIMIT {
        return Err(Error::TooLarge {
            max: DENSE_LIMIT,
            got: m,
        });
    }
    let a = DMatrix::from_row_slice(m, m, &op.to_dense());
    let eig = SymmetricEigen::new(a);
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m, m, |r, c| eig.eigenvectors[(r, idx[c])]);
    Ok(EigenBasis {
        grid,
        provenance: Provenance::DenseNumeric,
        repr: Repr::Dense { vectors },
        eigenvalues,
        order: Vec::new(),
    })
}

impl EigenBasis {
    fn separable(
        grid: Grid2D,
        provenance: Provenance,
        lam1: Vec<f64>,
        lam2: Vec<f64>,
        v1: DMatrix<f64>,
        v2: DMatrix<f64>,
    ) -> Self {
        let mut order: Vec<(usize, usize)> = (0..lam2.len())
            .flat_map(|k2| (0..lam1.len()).map(move |k1| (k1, k2)))
            .collect();
        order.sort_by(|a, b| (lam1[a.0] + lam2[a.1]).total_cmp(&(lam1[b.0] + lam2[b.1])));
        let eigenvalues = order.iter().map(|&(i, j)| lam1[i] + lam2[j]).collect();
        Self {
            grid,
            provenance,
            repr: Repr::Separable { lam1, lam2, v1, v2 },
            eigenvalues,
            order,
        }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn smallest(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Mode numbers `(m1, m2)` (1-based) of the `idx`-th eigenpair; `None`
    /// for a dense basis.
    pub fn mode_numbers(&self, idx: usize) -> Option<(usize, usize)> {
        self.order.get(idx).map(|&(a, b)| (a + 1, b + 1))
    }

    /// Eigenvalue of mode `(m1, m2)` of a separable basis.
    pub fn mode_eigenvalue(&self, m1: usize, m2: usize) -> Option<f64> {
        match &self.repr {
            Repr::Separable { lam1, lam2, .. } => {
                Some(lam1.get(m1.checked_sub(1)?)? + lam2.get(m2.checked_sub(1)?)?)
            }
            Repr::Dense { .. } => None,
        }
    }

    /// Eigenvector of mode `(m1, m2)` of a separable basis, unit grid norm.
    pub fn mode(&self, m1: usize, m2: usize) -> Option<GridFunction> {
        let Repr::Separable { v1, v2, .. } = &self.repr else {
            return None;
        };
        if !(1..=v1.ncols()).contains(&m1) || !(1..=v2.ncols()).contains(&m2) {
            return None;
        }
        let w = 1.0 / self.grid.cell_area().sqrt();
        let values = self
            .grid
            .nodes()
            .map(|(i1, i2)| w * v1[(i1 - 1, m1 - 1)] * v2[(i2 - 1, m2 - 1)])
            .collect();
        GridFunction::from_values(self.grid, values).ok()
    }

    /// `idx`-th eigenvector in ascending eigenvalue order, unit grid norm.
    pub fn eigenvector(&self, idx: usize) -> GridFunction {
        match &self.repr {
            Repr::Separable { .. } => {
                let (a, b) = self.order[idx];
                self.mode(a + 1, b + 1).expect("index from the mode table")
            }
            Repr::Dense { vectors } => {
                let w = 1.0 / self.grid.cell_area().sqrt();
                let values = vectors.column(idx).iter().map(|v| w * v).collect();
                GridFunction::from_values(self.grid, values).expect("finite eigenvector")
            }
        }
    }

    /// Coefficients `(y, phi_m)` in ascending eigenvalue order.
    pub fn coefficients(&self, y: &GridFunction) -> Result<Vec<f64>> {
        self.check(y)?;
        let w = self.grid.cell_area().sqrt();
        Ok(match &self.repr {
            Repr::Separable { v1, v2, .. } => {
                let c = self.to_modes(y, v1, v2);
                self.order.iter().map(|&(i, j)| w * c[(i, j)]).collect()
            }
            Repr::Dense { vectors } => {
                let yv = nalgebra::DVector::from_column_slice(y.values());
                (vectors.transpose() * yv).iter().map(|c| w * c).collect()
            }
        })
    }

    fn check(&self, y: &GridFunction) -> Result<()> {
        if *y.grid() == self.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    fn to_modes(&self, y: &GridFunction, v1: &DMatrix<f64>, v2: &DMatrix<f64>) -> DMatrix<f64> {
        let ym = DMatrix::from_column_slice(self.grid.m1(), self.grid.m2(), y.values());
        v1.transpose() * ym * v2
    }

    /// `g(A) y` for a scalar function `g` of the eigenvalue.
    pub fn apply_function(&self, y: &GridFunction, g: impl Fn(f64) -> f64) -> Result<GridFunction> {
        self.check(y)?;
        let values: Vec<f64> = match &self.repr {
            Repr::Separable { lam1, lam2, v1, v2 } => {
                let mut c = self.to_modes(y, v1, v2);
                for j in 0..lam2.len() {
                    for i in 0..lam1.len() {
                        c[(i, j)] *= g(lam1[i] + lam2[j]);
                    }
                }
                let out = v1 * c * v2.transpose();
                out.as_slice().to_vec()
            }
            Repr::Dense { vectors } => {
                let yv = nalgebra::DVector::from_column_slice(y.values());
                let mut c = vectors.transpose() * yv;
                for (ci, lam) in c.iter_mut().zip(&self.eigenvalues) {
                    *ci *= g(*lam);
                }
                (vectors * c).as_slice().to_vec()
            }
        };
        GridFunction::from_values(self.grid, values)
    }

    /// `A^s y`, computed as `exp(s ln lambda)`.
    pub fn apply_power(&self, s: f64, y: &GridFunction) -> Result<GridFunction> {
        if let Some(&lam) = self.eigenvalues.first() {
            if !(lam > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "operator is not positive definite (smallest eigenvalue {lam:e})"
                )));
            }
        }
        self.apply_function(y, |lam| (s * lam.ln()).exp())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "fractional exponent must lie in (0, 1], got {alpha}"
        )))
    }
}

/// `A^alpha y`.
pub fn apply_fractional_power(basis: &EigenBasis, alpha: f64, y: &GridFunction) -> Result<GridFunction> {
    check_alpha(alpha)?;
    basis.apply_power(alpha, y)
}

/// Discrete solution `w = A^{-alpha} f`.
pub fn reference_solve(basis: &EigenBasis, alpha: f64, f: &GridFunction) -> Result<GridFunction> {
    check_alpha(alpha)?;
    basis.apply_power(-alpha, f)
}

/// Eigenvalue `pi^2 (m1^2 / l1^2 + m2^2 / l2^2)` of the continuous Dirichlet Laplacian.
pub fn continuous_eigenvalue(grid: &Grid2D, m1: usize, m2: usize) -> f64 {
    let (a, b) = (m1 as f64 / grid.l1(), m2 as f64 / grid.l2());
    PI * PI * (a * a + b * b)
}

/// Continuous Dirichlet eigenfunction `sin(pi m1 x1 / l1) sin(pi m2 x2 / l2)` on the grid.
pub fn sine_mode(grid: &Grid2D, m1: usize, m2: usize) -> GridFunction {
    let (k1, k2) = (PI * m1 as f64 / grid.l1(), PI * m2 as f64 / grid.l2());
    GridFunction::from_fn(*grid, |x1, x2| (k1 * x1).sin() * (k2 * x2).sin())
}

/// Modes making up the model right-hand side.
pub const MODEL_MODES: [(usize, usize); 2] = [(1, 1), (3, 2)];

/// Exact solution of the continuous model problem: each sine mode of the
/// right-hand side divided by its eigenvalue to the power `alpha`.
pub fn exact_continuous_solution(grid: &Grid2D, alpha: f64) -> Result<GridFunction> {
    check_alpha(alpha)?;
    let mut u = GridFunction::zeros(*grid);
    for (m1, m2) in MODEL_MODES {
        let nu = continuous_eigenvalue(grid, m1, m2);
        u.axpy(nu.powf(-alpha), &sine_mode(grid, m1, m2))?;
    }
    Ok(u)
}
