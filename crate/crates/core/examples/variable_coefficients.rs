//! Variable diffusion and reaction coefficients. The dense eigensolver gives
//! the exact discrete A^(-alpha) f, which the CG-based scheme approaches as
//! the number of steps grows.
//!
//! cargo run --release --example variable_coefficients

use fracell::evolution::{run_two_level, SchemeConfig};
use fracell::spectral::{dense_basis, reference_solve};
use fracell::{norm, CoefficientField, DeltaRule, Discretization, Grid2D, GridFunction};

fn main() -> fracell::Result<()> {
    let grid = Grid2D::new(1.0, 1.0, 24, 24)?;
    let coeff = CoefficientField::from_fns(
        grid,
        |x, y| 1.0 + 0.5 * (3.0 * x).sin().powi(2) + y,
        |x, _| 2.0 * x,
        1.0,
    )?;
    let f = GridFunction::from_fn(grid, |x, y| if x < 0.5 && y < 0.5 { 1.0 } else { 0.0 });
    let alpha = 0.75;

    let disc = Discretization::new(coeff, DeltaRule::Certified);
    let basis = dense_basis(disc.operator())?;
    let w = reference_solve(&basis, alpha, &f)?;
    println!("lambda_min = {:.4}, delta = {:.4}", basis.smallest(), disc.delta());

    for steps in [10, 20, 40, 80, 160] {
        let cfg = SchemeConfig::new(alpha, 0.5, 0.5, steps)?;
        let y = run_two_level(&f, &cfg, &disc)?.solution;
        println!("N = {steps:4}: |y - w| / |w| = {:.3e}", norm(&y.sub(&w)?) / norm(&w));
    }
    Ok(())
}
