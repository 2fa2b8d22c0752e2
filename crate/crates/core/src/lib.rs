//! Finite-difference solvers for fractional powers of elliptic operators.
//!
//! The equation `A^alpha w = f` with a second-order elliptic operator on a
//! rectangle is solved by integrating an auxiliary pseudo-time problem
//! `(t D + theta delta I) y' + alpha D y = 0` from `t = 0` to `t = 1`.

pub mod error;
pub mod evolution;
pub mod experiments;
pub mod grid;
pub mod linsolve;
pub mod operators;
pub mod spectral;
pub mod splitting;

pub use error::{Error, Result};
pub use grid::{inner_product, norm, norm_energy, Grid2D, GridFunction};
pub use operators::{
    CoefficientField, DeltaRule, Direction, Discretization, FullOperator, GridOperator,
    SpectralBounds, SplitOperator,
};
