//! Command-line front end for `tetfit-core`.
//!
//! Exit codes: 0 on success, 1 on any error, 2 when a command ran but did not
//! reach its goal (fit hit the iteration limit, every ridge cylinder was
//! skipped, or a checked mesh has defects or unexpected counts).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod io;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::Context;
pub use config::Config;
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "tetfit", version, about = "Fit tetrahedral templates to target surfaces")]
pub struct Cli {
    /// JSON config with `weights`, `params` and `paths` sections.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override a config value, e.g. `--set params.pd_iterations=20`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub overrides: Vec<String>,
    /// Seed for randomized fixtures.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Suppress the human-readable summary and progress logging.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a template to a target surface.
    Fit(commands::fit::FitArgs),
    /// Generate ridge targets from cylinders on a head surface.
    Ridge(commands::ridge::RidgeArgs),
    /// Validate a mesh and print its report.
    Check(commands::check::CheckArgs),
    /// Write a synthetic fixture mesh.
    Synth(commands::synth::SynthArgs),
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                1
            } else {
                0
            }
        }
    }
}

/// Runs a parsed command line, reporting errors on standard error.
pub fn execute(cli: &Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult<i32> {
    let ctx = Context {
        config: Config::resolve(cli.config.as_deref(), &cli.overrides)?,
        seed: cli.seed,
        quiet: cli.quiet,
    };
    match &cli.command {
        Command::Fit(args) => commands::fit::run(&ctx, args),
        Command::Ridge(args) => commands::ridge::run(&ctx, args),
        Command::Check(args) => commands::check::run(&ctx, args),
        Command::Synth(args) => commands::synth::run(&ctx, args),
    }
}
