//! Computes A^(-alpha) f for the two-mode model problem with the weighted
//! two-level pseudo-time scheme and compares against the spectral reference.
//!
//! cargo run --release --example two_level_solve -- [n] [steps] [alpha]

use fracell::evolution::{run_two_level, SchemeConfig};
use fracell::experiments::ModelProblem;
use fracell::{norm, DeltaRule, Grid2D};

fn main() -> fracell::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(64);
    let steps: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(40);
    let alpha: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.5);

    let grid = Grid2D::unit_square(n)?;
    let problem = ModelProblem::new(grid, alpha)?;
    let disc = problem.discretization(DeltaRule::Certified);
    println!("grid {n}x{n}, alpha = {alpha}, N = {steps}, delta = {:.6}", disc.delta());

    for theta in [1.0, 0.5] {
        for sigma in [1.0, 0.5] {
            let cfg = SchemeConfig::new(alpha, theta, sigma, steps)?;
            let run = run_two_level(problem.rhs(), &cfg, &disc)?;
            let e = problem.errors(&run.solution)?;
            println!(
                "theta = {theta:<4} sigma = {sigma:<4} eps = {:.7}  eps_A = {:.7}  |y - w| = {:.3e}",
                e.eps, e.eps_a, e.eps_ref
            );
        }
    }
    println!("spatial error |w - u| = {:.3e}", problem.spatial_error());
    println!("|u| = {:.6}", norm(problem.exact()));
    Ok(())
}
