//! Line-wise tridiagonal solves, the separable direct solver and
//! preconditioned CG on shifted operators.
//!
//! cargo run --example line_solvers

use fracell::linsolve::{
    spd_solve_from, thomas_solve_lines, SeparableSolver, ShiftedFullSystem, ShiftedLineSystem,
    DEFAULT_CG_TOL,
};
use fracell::operators::{Direction, SplitOperator};
use fracell::{norm, CoefficientField, FullOperator, Grid2D, GridFunction, GridOperator};

fn main() -> fracell::Result<()> {
    let grid = Grid2D::unit_square(64)?;
    let rhs = GridFunction::from_fn(grid, |x, y| (x - 0.3).abs() + y * y);

    // (2 I + 0.1 A_2) y = rhs with a variable coefficient, one Thomas sweep per line
    let coeff = CoefficientField::from_fns(grid, |x, y| 1.0 + x + y * y, |_, _| 0.0, 1.0)?;
    let a2 = SplitOperator::assemble(&coeff, Direction::X2);
    let sys = ShiftedLineSystem::new(&a2, 2.0, 0.1);
    let y = thomas_solve_lines(&sys, &rhs)?;
    println!("line solve residual: {:.2e}", norm(&sys.apply(&y)?.sub(&rhs)?));

    // full 2-D operator with constant coefficients: direct versus CG
    let op = FullOperator::assemble(&CoefficientField::laplacian(grid));
    let direct = SeparableSolver::new(&op)?;
    let yd = direct.solve(5.0, 0.25, &rhs)?;
    let full = ShiftedFullSystem::new(&op, 5.0, 0.25);
    let (yc, iters) = spd_solve_from(&full, &rhs, GridFunction::zeros(grid), DEFAULT_CG_TOL)?;
    println!("direct residual:     {:.2e}", norm(&full.apply(&yd)?.sub(&rhs)?));
    println!("CG: {iters} iterations, |y_cg - y_direct| = {:.2e}", norm(&yc.sub(&yd)?));

    // variable coefficients cannot be diagonalised line by line
    let variable = FullOperator::assemble(&coeff);
    match SeparableSolver::new(&variable) {
        Ok(_) => println!("unexpected: variable operator accepted"),
        Err(e) => println!("separable solver rejected variable operator: {e}"),
    }
    Ok(())
}
