//! Command-line front end: single verifications, parameter-grid sweeps,
//! and table dumps, with JSON/CSV report streams and stable exit codes.
//!
//! Exit codes: 0 all verdicts pass; 1 at least one fail; 2 invalid
//! configuration; 3 evaluation error (convergence guard, exhausted work
//! budget, domain error during evaluation).

mod config;
mod grid;
mod output;
mod pool;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use besselsum::Error;

#[derive(Parser)]
#[command(
    name = "besselsum",
    about = "Certified numerical verification of Bessel-series identities",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify one identity over the given parameters (lists allowed).
    Verify(VerifyArgs),
    /// Grid sweep: identical to `verify`, named for intent; crosses all
    /// parameter lists and evaluates points in parallel (`--jobs`).
    Sweep(VerifyArgs),
    /// Dump arithmetic/character tables as CSV.
    Table(TableArgs),
}

#[derive(Args, Clone, Default)]
pub struct VerifyArgs {
    /// Identity: popov | theta | cn | voronoi | odd-char | sine |
    /// reduction | integrals
    pub identity: String,

    /// Config file (flat `key = value` lines, lists as `k = [2,3,4]`);
    /// command-line flags override file entries.
    #[arg(long)]
    pub config: Option<std::path::PathBuf>,

    /// Dimension(s) k, e.g. `2` or `[2,3,4]`
    #[arg(long)]
    pub k: Option<String>,
    /// Positive argument(s) z
    #[arg(long)]
    pub z: Option<String>,
    /// Right-half-plane parameter(s) t, e.g. `1.3` or `1.0+0.5i`
    #[arg(long)]
    pub t: Option<String>,
    /// Right-half-plane argument(s) y (theta transform)
    #[arg(long)]
    pub y: Option<String>,
    /// Exponential rate(s) s (Voronoi test function)
    #[arg(long)]
    pub s: Option<String>,
    /// Summation endpoint(s) x
    #[arg(long)]
    pub x: Option<String>,
    /// Rational angle(s) theta as exact fractions, e.g. `1/3` or `[1/3,2/7]`
    #[arg(long)]
    pub theta: Option<String>,
    /// Prime modulus/moduli q
    #[arg(long, visible_alias = "q")]
    pub modulus: Option<String>,
    /// Residue(s) a for the reduction chain
    #[arg(long)]
    pub a: Option<String>,
    /// Riesz order(s) q for the cn identity
    #[arg(long)]
    pub order: Option<String>,
    /// Auxiliary integer(s) n for the double-Bessel integral checks
    #[arg(long)]
    pub n: Option<String>,
    /// Character index filter for odd-char / cn with a character instance
    #[arg(long)]
    pub chi_index: Option<String>,

    /// Requested series tolerance for the absolutely convergent identities
    #[arg(long)]
    pub tol: Option<String>,
    /// Coefficient-table length for the conditionally convergent series
    #[arg(long)]
    pub table_len: Option<String>,
    /// Snap tolerance override (relative) for endpoint detection in A_q
    #[arg(long)]
    pub snap_tol: Option<String>,
    /// Bessel J series/asymptotic switch-point override
    #[arg(long)]
    pub x_switch: Option<String>,
    /// Scaled-I series/asymptotic switch-point override
    #[arg(long)]
    pub w_switch: Option<String>,

    /// Output format: json (one record per line) or csv
    #[arg(long)]
    pub format: Option<String>,
    /// Output path (default: stdout)
    #[arg(long)]
    pub output: Option<std::path::PathBuf>,
    /// Worker count for sweeps (default: env BESSELSUM_JOBS, then 1)
    #[arg(long)]
    pub jobs: Option<String>,
}

#[derive(Args)]
pub struct TableArgs {
    /// Table: rk | dchi | characters
    pub which: String,
    /// Dimension k (rk table)
    #[arg(long)]
    pub k: Option<u32>,
    /// Prime modulus (dchi / characters)
    #[arg(long, visible_alias = "q")]
    pub modulus: Option<u32>,
    /// Character index (dchi; default: smallest odd primitive)
    #[arg(long)]
    pub chi_index: Option<u32>,
    /// Number of entries to dump
    #[arg(long, default_value_t = 100)]
    pub n_max: u64,
    /// Output path (default: stdout)
    #[arg(long)]
    pub output: Option<std::path::PathBuf>,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        // configuration problems are caught before evaluation; anything
        // surfacing from an evaluator is an evaluation failure
        Error::ConvergenceGuard(_) | Error::BudgetExhausted(_) | Error::Overflow(_) => 3,
        Error::Domain(_) => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Verify(args) | Cmd::Sweep(args) => run_verify(args),
        Cmd::Table(args) => run_table(args),
    };
    match result {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(RunError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Eval(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
        Err(RunError::Io(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

/// Error split mirroring the exit-code contract.
pub enum RunError {
    Config(String),
    Eval(Error),
    Io(std::io::Error),
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

fn run_verify(args: VerifyArgs) -> Result<bool, RunError> {
    let cfg = config::ResolvedConfig::from_args(args)?;
    let jobs = cfg.jobs;
    let points = grid::build_grid(&cfg)?;
    let reports = pool::evaluate_ordered(points, jobs)?;
    let mut out = output::open_sink(cfg.output.as_deref())?;
    output::write_reports(&mut out, &reports, cfg.format)?;
    Ok(reports.iter().all(|r| r.passed()))
}

fn run_table(args: TableArgs) -> Result<bool, RunError> {
    let mut out = output::open_sink(args.output.as_deref())?;
    output::write_table(&mut out, &args)?;
    Ok(true)
}
