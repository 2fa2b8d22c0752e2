//! Discrete Dirichlet Laplacian on a rectangle: analytic eigenpairs, the
//! spectral lower bound, and a fractional power applied to a sine mode.
//!
//! cargo run --example laplacian_spectrum

use fracell::operators::{spectral_lower_bound, Direction};
use fracell::spectral::{analytic_laplacian_basis, continuous_eigenvalue};
use fracell::{norm, CoefficientField, FullOperator, Grid2D, GridOperator};

fn main() -> fracell::Result<()> {
    let grid = Grid2D::new(1.0, 2.0, 32, 48)?;
    let coeff = CoefficientField::laplacian(grid);
    let op = FullOperator::assemble(&coeff);
    let basis = analytic_laplacian_basis(&grid);

    println!("{} unknowns, smallest eigenvalues:", basis.len());
    for idx in 0..5 {
        let (m1, m2) = basis.mode_numbers(idx).expect("separable basis");
        let lam = basis.eigenvalues()[idx];
        let phi = basis.eigenvector(idx);
        let residual = norm(&op.apply(&phi)?.sub(&phi.scaled(lam))?);
        println!(
            "  ({m1},{m2})  lambda_h = {lam:10.4}  continuous = {:10.4}  |A phi - lambda phi| = {residual:.1e}",
            continuous_eigenvalue(&grid, m1, m2)
        );
    }

    let delta = spectral_lower_bound(&grid, &coeff, Direction::X1)
        + spectral_lower_bound(&grid, &coeff, Direction::X2);
    println!("lower bound delta = {delta:.6}, lambda_min = {:.6}", basis.smallest());

    let phi = basis.mode(2, 1).expect("mode exists");
    let lam = basis.mode_eigenvalue(2, 1).expect("mode exists");
    let half = basis.apply_power(-0.5, &phi)?;
    println!(
        "A^(-1/2) on mode (2,1): |result| = {:.6}, expected lambda^(-1/2) = {:.6}",
        norm(&half),
        lam.powf(-0.5)
    );
    Ok(())
}
