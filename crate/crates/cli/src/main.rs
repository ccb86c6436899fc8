//! `ddbar`: batch front end for solving, verification and certification.
//!
//! Exit codes: 0 success, 1 a check failed (reports still written),
//! 2 invalid input. Failures print `{"kind": .., "reason": ..}` to stderr.

mod commands;
mod error;
mod files;
mod problem;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;
use crate::problem::DEFAULT_TRUNCATION;

#[derive(Debug, Parser)]
#[command(name = "ddbar", version, about = "Minimum-norm solver and exact verifier for (d^k dbar^k + c) u = f")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a problem file and write the solution with its report.
    Solve(SolveArgs),
    /// Run the exact lemma suites.
    Verify(VerifyArgs),
    /// Sweep the norm bound over orders and constants on random data.
    Certify(CertifyArgs),
    /// Estimate the norm of the right inverse by power iteration.
    Probe(ProbeArgs),
    /// Export the finite-difference residual of a k=1 solution as CSV.
    Eval(EvalArgs),
    /// Solve with data given on a disk and check the disk estimate.
    Disk(DiskArgs),
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    /// Defaults to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    /// Single order; defaults to 1 through 4.
    #[arg(long)]
    k: Option<u32>,
    /// Single constant (with --c-im); defaults to the built-in grid.
    #[arg(long, allow_negative_numbers = true)]
    c_re: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c_im: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    truncation: u32,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    c_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    c_im: f64,
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    truncation: u32,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Problem file with k = 1.
    #[arg(long)]
    input: PathBuf,
    /// CSV destination; defaults to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    x_min: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    x_max: f64,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    y_min: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    y_max: f64,
    #[arg(long, default_value_t = 0.1)]
    step: f64,
}

#[derive(Debug, Args)]
struct DiskArgs {
    /// Problem file with f in the monomial basis.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    center_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    center_im: f64,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Radial and angular node counts; both or neither.
    #[arg(long, requires = "angular_nodes")]
    radial_nodes: Option<usize>,
    #[arg(long, requires = "radial_nodes")]
    angular_nodes: Option<usize>,
}

fn dispatch(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Solve(a) => commands::solve(&a.input, a.output.as_deref()),
        Command::Verify(a) => commands::verify(a.k, a.trials, a.seed, a.output.as_deref()),
        Command::Certify(a) => {
            let c = match (a.c_re, a.c_im) {
                (None, None) => None,
                (re, im) => Some(num_complex::Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0))),
            };
            commands::certify(a.k, c, a.truncation, a.trials, a.seed, a.output.as_deref())
        }
        Command::Probe(a) => commands::probe(
            a.k,
            num_complex::Complex64::new(a.c_re, a.c_im),
            a.truncation,
            a.trials,
            a.seed,
            a.output.as_deref(),
        ),
        Command::Eval(a) => {
            let grid = ddbar_core::numeric::GridSpec {
                x_min: a.x_min,
                x_max: a.x_max,
                y_min: a.y_min,
                y_max: a.y_max,
                h: a.step,
            };
            commands::eval(&a.input, a.output.as_deref(), &grid)
        }
        Command::Disk(a) => {
            let quadrature = match (a.radial_nodes, a.angular_nodes) {
                (Some(radial_nodes), Some(angular_nodes)) => Some(ddbar_core::spectral::DiskQuadrature {
                    radial_nodes,
                    angular_nodes,
                }),
                _ => None,
            };
            commands::disk(
                &a.input,
                a.output.as_deref(),
                num_complex::Complex64::new(a.center_re, a.center_im),
                a.radius,
                quadrature,
            )
        }
    }
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let err = CliError::Usage(e.kind().to_string() + ": " + e.to_string().lines().next().unwrap_or(""));
            eprintln!("{}", err.to_json());
            return 2;
        }
    };
    match dispatch(cli) {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("{}", serde_json::json!({"kind": "check_failed", "reason": "one or more checks failed; see the report"}));
            1
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

fn main() {
    std::process::exit(run());
}
