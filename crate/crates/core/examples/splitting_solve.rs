//! The additive vector scheme: one tridiagonal solve per direction and step.
//! Prints component errors and checks the per-step energy inequality.
//!
//! cargo run --release --example splitting_solve -- [n] [steps]

use fracell::experiments::ModelProblem;
use fracell::splitting::{run_splitting, SplittingSetup};
use fracell::{norm, DeltaRule, Grid2D};

fn main() -> fracell::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(100);
    let steps: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(40);

    let grid = Grid2D::unit_square(n)?;
    let problem = ModelProblem::new(grid, 0.5)?;
    let disc = problem.discretization(DeltaRule::Certified);

    for theta in [1.0, 0.5] {
        let setup = SplittingSetup::new(&disc, 0.5, theta, 1.0, 1.0, steps)?;
        let run = run_splitting(problem.rhs(), &setup)?;
        println!("theta = {theta}, N = {steps}:");
        for i in 0..setup.p() {
            let e = problem.errors(run.state.component(i))?;
            println!("  component {}: eps = {:.7}  eps_A = {:.7}", i + 1, e.eps, e.eps_a);
        }
        let gap = norm(&run.state.component(0).sub(run.state.component(1))?);
        let worst = run
            .energies
            .iter()
            .map(|e| e.e_plus / e.e_minus)
            .fold(0.0, f64::max);
        let ok = run.energies.iter().all(|e| e.holds(1e-10));
        println!("  |y1 - y2| = {gap:.3e}, max E+/E- = {worst:.6} ({})", if ok { "ok" } else { "violated" });
    }
    Ok(())
}
