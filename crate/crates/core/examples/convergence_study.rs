//! Observed orders in the time step, driven by the same TOML format the CLI
//! reads.
//!
//! cargo run --release --example convergence_study

use fracell::experiments::{convergence_sweep, ExperimentSpec};

const CONFIG: &str = r#"
grid.n1 = 64
alpha = 0.5
theta = [1.0, 0.5]
scheme.kind = "two_level"
scheme.sigma = [1.0, 0.5]
steps = [20, 40, 80, 160]
solver.kind = "direct"
"#;

fn main() -> fracell::Result<()> {
    let spec = ExperimentSpec::from_toml_str(CONFIG)?;
    let sweep = convergence_sweep(&spec)?;
    for o in &sweep.orders {
        let errs: Vec<String> = o.eps_ref.iter().map(|e| format!("{e:.2e}")).collect();
        println!(
            "theta = {:<4} sigma = {:<4} |y - w|: {}  order {:.2}",
            o.theta,
            o.sigma1,
            errs.join(" "),
            o.order
        );
    }
    Ok(())
}
