//! `gromon`: generate fixtures, compute Gromov-Monge distances, lower bounds
//! and invariants, and run verification suites. Results are JSON on stdout
//! (or `--out`), CSV where asked for.
//!
//! Exit codes: 0 on success, 2 when the requested distance is infinite, 1 on
//! errors and failed verifications.

mod cmd;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use gromon_core::PExponent;
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "gromon", version, about = "Gromov-Monge distances, distance distributions and their counterexamples")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distances and lower bounds between two spaces.
    #[command(subcommand)]
    Dist(cmd::dist::Dist),
    /// Fixture generators.
    #[command(subcommand)]
    Gen(cmd::gen::Gen),
    /// Distance distributions and node multisets.
    #[command(subcommand)]
    Invariant(cmd::invariant::Invariant),
    /// Metric tree tools.
    #[command(subcommand)]
    Tree(cmd::tree::Tree),
    /// Verification suites; nonzero exit on any failure.
    #[command(subcommand)]
    Verify(cmd::verify::Verify),
    /// Curve fitting.
    #[command(subcommand)]
    Fit(cmd::fit::Fit),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScalarMode {
    Rational,
    Float,
}

#[derive(Args, Clone, Debug)]
pub struct Global {
    /// Exponent p: a positive integer or `inf`.
    #[arg(long, global = true, default_value = "1", value_parser = parse_p)]
    pub p: PExponent,
    /// Field to compute in. Default: rational when every input is rational.
    #[arg(long, global = true, value_enum)]
    pub scalar: Option<ScalarMode>,
    /// Seed for randomized commands (required by them).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Discretization mesh for metric graphs, as `p/q`.
    #[arg(long, global = true, default_value = "1/4")]
    pub mesh: String,
    /// Comparison tolerance in float mode.
    #[arg(long, global = true, default_value_t = gromon_core::space::DEFAULT_TOL)]
    pub tol: f64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest source size for exhaustive searches.
    #[arg(long = "size-guard", global = true)]
    pub size_guard: Option<usize>,
    /// Write the result to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
}

fn parse_p(s: &str) -> std::result::Result<PExponent, String> {
    s.parse::<PExponent>().map_err(|e| e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Infinite,
    Failed,
}

/// What a command prints and how the process exits.
#[derive(Debug)]
pub struct Outcome {
    pub body: String,
    pub status: Status,
}

impl Outcome {
    pub fn json(v: Value) -> Self {
        Outcome::json_with(v, Status::Ok)
    }

    pub fn json_with(v: Value, status: Status) -> Self {
        let mut body = serde_json::to_string_pretty(&v).expect("JSON values serialize");
        body.push('\n');
        Outcome { body, status }
    }

    pub fn text(body: String) -> Self {
        Outcome { body, status: Status::Ok }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    if let Some(n) = cli.global.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    }
    let g = &cli.global;
    match cli.command {
        Command::Dist(c) => cmd::dist::run(c, g),
        Command::Gen(c) => cmd::gen::run(c, g),
        Command::Invariant(c) => cmd::invariant::run(c, g),
        Command::Tree(c) => cmd::tree::run(c, g),
        Command::Verify(c) => cmd::verify::run(c, g),
        Command::Fit(c) => cmd::fit::run(c, g),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GROMON_LOG", "warn")).init();
    let cli = Cli::parse();
    let out = cli.global.out.clone();
    let result = run(cli).and_then(|o| {
        io::write_output(out.as_deref(), &o.body)?;
        Ok(o.status)
    });
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Infinite) => ExitCode::from(2),
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
