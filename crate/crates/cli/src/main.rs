use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ncstar_cli::{parse_problem, run, CliError, RunOptions, Task};

/// Exact checks of star products, Darboux coordinates and trace functionals
/// for a polynomial Poisson bivector.
#[derive(Debug, Parser)]
#[command(name = "ncstar", version)]
struct Args {
    /// Problem file (JSON).
    problem: PathBuf,

    /// Task to run; repeat for several. Overrides the file's task list.
    #[arg(long = "task", value_name = "TASK")]
    tasks: Vec<Task>,

    /// Theta truncation order.
    #[arg(long)]
    order: Option<u32>,

    /// Seed for the randomized suites.
    #[arg(long)]
    seed: Option<u64>,

    /// Compact single-line JSON.
    #[arg(long, conflicts_with = "pretty")]
    json: bool,

    /// Indented JSON (default).
    #[arg(long)]
    pretty: bool,

    /// Include per-task wall-clock time.
    #[arg(long)]
    timing: bool,
}

fn load(args: &Args) -> Result<(ncstar_cli::ProblemFile, ncstar_cli::Model), CliError> {
    let path = args.problem.display().to_string();
    let text = std::fs::read_to_string(&args.problem).map_err(|source| CliError::Io { path: path.clone(), source })?;
    let problem = parse_problem(&text).map_err(|e| match e {
        CliError::Json { line, column, message } => CliError::Invalid(format!("{path}:{line}:{column}: {message}")),
        other => other,
    })?;
    let model = problem.model()?;
    Ok((problem, model))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (problem, model) = match load(&args) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions { tasks: args.tasks.clone(), order: args.order, seed: args.seed, timing: args.timing };
    let report = run(&problem, &model, &opts);
    let text = if args.json {
        serde_json::to_string(&report)
    } else {
        serde_json::to_string_pretty(&report)
    }
    .expect("report serializes");
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{text}").is_err() {
        return ExitCode::from(2);
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
