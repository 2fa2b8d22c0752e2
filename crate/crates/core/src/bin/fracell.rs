use clap::{Args, Parser, Subcommand};
use fracell::experiments::output::{rows, write_csv, write_json, Format};
use fracell::experiments::verify::{problem_checks, report_checks, Check};
use fracell::experiments::{
    convergence_sweep, reproduce_table, run_all, ErrorReport, ExperimentSpec, ModelProblem,
};
use fracell::Error;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Fractional powers of elliptic operators via pseudo-time integration.
#[derive(Parser)]
#[command(name = "fracell", version)]
struct Cli {
    /// Append oracle cross-checks; a failed check exits with status 2.
    #[arg(long, global = true)]
    verify: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long)]
    out: PathBuf,
    /// Output format; defaults to the extension of --out.
    #[arg(long)]
    format: Option<String>,
    /// Write wall_ms as 0 for byte-identical output.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one of the six standard error tables.
    Table {
        #[arg(long)]
        id: u8,
        /// Write per-run rows here instead of only printing the table.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        no_timing: bool,
    },
    /// Run a single configuration.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run every combination in a configuration; fits orders when at least
    /// three step counts are given.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn open(path: &Path) -> Result<BufWriter<File>, Error> {
    Ok(BufWriter::new(File::create(path)?))
}

fn format_for(path: &Path, explicit: &Option<String>) -> Result<Format, Error> {
    match explicit {
        Some(f) => Format::parse(f),
        None => Ok(Format::from_path(path)),
    }
}

fn write_reports(
    reports: &[ErrorReport],
    path: &Path,
    format: Format,
    timing: bool,
    extra: Option<serde_json::Value>,
) -> Result<(), Error> {
    let rs = rows(reports, timing);
    let mut w = open(path)?;
    match format {
        Format::Csv => write_csv(&mut w, &rs)?,
        Format::Json => {
            let mut doc = serde_json::json!({ "runs": rs });
            if let Some(serde_json::Value::Object(m)) = extra {
                doc.as_object_mut().expect("object").extend(m);
            }
            write_json(&mut w, &doc)?
        }
    }
    w.flush()?;
    Ok(())
}

fn run_checks(reports: &[ErrorReport]) -> Result<bool, Error> {
    let mut checks: Vec<Check> = Vec::new();
    let mut problems: Vec<ModelProblem> = Vec::new();
    for r in reports {
        let pos = problems
            .iter()
            .position(|p| *p.grid() == r.grid && p.alpha() == r.alpha);
        let idx = match pos {
            Some(i) => i,
            None => {
                problems.push(ModelProblem::new(r.grid, r.alpha)?);
                checks.extend(problem_checks(problems.last().expect("pushed"))?);
                problems.len() - 1
            }
        };
        checks.extend(report_checks(r, &problems[idx]));
    }
    let mut ok = true;
    for c in &checks {
        ok &= c.passed;
        println!(
            "verify {}: {} ({:.3e} <= {:.1e})",
            c.name,
            if c.passed { "ok" } else { "FAILED" },
            c.value,
            c.limit
        );
    }
    Ok(ok)
}

fn execute(cli: Cli) -> Result<bool, Error> {
    let reports = match cli.cmd {
        Cmd::Table {
            id,
            out,
            format,
            no_timing,
        } => {
            let table = reproduce_table(id)?;
            print!("{}", table.render());
            if let Some(path) = out {
                let fmt = format_for(&path, &format)?;
                let extra = serde_json::json!({ "table": &table });
                write_reports(&table.reports, &path, fmt, !no_timing, Some(extra))?;
            }
            table.reports
        }
        Cmd::Solve { config, out } => {
            let spec = ExperimentSpec::from_file(&config)?;
            if !spec.is_single() {
                return Err(Error::Config(format!(
                    "solve expects a single configuration, got {} runs; use sweep",
                    spec.len()
                )));
            }
            let reports = run_all(&spec.runs()?)?;
            for r in &reports {
                for (i, c) in r.components.iter().enumerate() {
                    println!(
                        "component {i}: eps = {:.7}  eps_A = {:.7}  eps_ref = {:.7e}",
                        c.eps, c.eps_a, c.eps_ref
                    );
                }
            }
            let fmt = format_for(&out.out, &out.format)?;
            write_reports(&reports, &out.out, fmt, !out.no_timing, None)?;
            reports
        }
        Cmd::Sweep { config, out } => {
            let spec = ExperimentSpec::from_file(&config)?;
            let fmt = format_for(&out.out, &out.format)?;
            if spec.steps.len() >= 3 {
                let res = convergence_sweep(&spec)?;
                for o in &res.orders {
                    println!(
                        "{} alpha={} theta={} sigma1={} grid={}x{} component {}: order {:.3}{}",
                        o.scheme,
                        o.alpha,
                        o.theta,
                        o.sigma1,
                        o.n1,
                        o.n2,
                        o.component,
                        o.order,
                        if o.monotone { "" } else { " (non-monotone)" }
                    );
                }
                let extra = serde_json::json!({ "orders": &res.orders });
                write_reports(&res.reports, &out.out, fmt, !out.no_timing, Some(extra))?;
                res.reports
            } else {
                let reports = run_all(&spec.runs()?)?;
                write_reports(&reports, &out.out, fmt, !out.no_timing, None)?;
                reports
            }
        }
    };
    if cli.verify {
        return run_checks(&reports);
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            let _ = writeln!(io::stderr(), "error: {e}");
            if e.is_solver_failure() {
                ExitCode::from(3)
            } else if matches!(e, Error::Io(_)) {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
