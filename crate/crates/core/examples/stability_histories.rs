//! Norm histories of the two-level scheme for random data. Both the L2 norm
//! and the D-norm are non-increasing for sigma >= 1/2.
//!
//! cargo run --release --example stability_histories

use fracell::evolution::{run_two_level, SchemeConfig, SolverKind};
use fracell::{CoefficientField, DeltaRule, Discretization, Grid2D, GridFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> fracell::Result<()> {
    let grid = Grid2D::unit_square(32)?;
    let disc = Discretization::new(CoefficientField::laplacian(grid), DeltaRule::Certified);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = GridFunction::from_values(grid, (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect())?;

    for sigma in [0.5, 0.75, 1.0] {
        for theta in [0.25, 0.5, 1.0] {
            let cfg = SchemeConfig::new(0.5, theta, sigma, 50)?.with_solver(SolverKind::Direct);
            let run = run_two_level(&f, &cfg, &disc)?;
            let d = run.d_norms();
            let grows = run.norms.windows(2).filter(|w| w[1] > w[0] * (1.0 + 1e-12)).count()
                + d.windows(2).filter(|w| w[1] > w[0] * (1.0 + 1e-12)).count();
            println!(
                "sigma = {sigma:<4} theta = {theta:<4} |y^0| = {:9.5} |y^N| = {:9.5} increases: {grows}",
                run.norms[0],
                run.norms[cfg.steps]
            );
        }
    }
    Ok(())
}
