//! Command-line front end for the heavytail library.
//!
//! Seven subcommands cover the analysis pipeline: `simulate` draws samples,
//! `taylor` fits the variance-mean scaling regression, `hill` runs the
//! alternative Hill plot, `fit` runs parametric tail fits, `network`
//! generates graphs and propagates node values, `ingest` loads real edge
//! lists, and `probe` measures the covariance-sum condition behind the
//! scaling limits.
//!
//! Every report embeds the resolved configuration and the seed actually
//! used, so a run can be reproduced from its own output. Output files are
//! written atomically: a failed command leaves nothing behind.

mod args;
mod cmd;
mod config;
mod emit;
mod sample_file;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use heavytail::{Error, Result};

#[derive(Parser)]
#[command(name = "heavytail", version, about = "Heavy-tailed scaling analysis toolkit")]
struct Cli {
    /// RNG seed. Precedence: this flag, then TAYLORLAW_SEED, then the
    /// config file, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// TOML config file with optional `seed` and `threads` keys.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw samples from a marginal family or a dependent process.
    Simulate(cmd::simulate::SimulateArgs),
    /// Variance-mean scaling regression over log-spaced subsample sizes.
    Taylor(cmd::taylor::TaylorArgs),
    /// Alternative Hill plot over a theta grid, with bootstrap bands.
    Hill(cmd::hill::HillArgs),
    /// Parametric tail fits: Pareto least squares, GPD, negative binomial.
    Fit(cmd::fit::FitArgs),
    /// Generate a random graph and propagate node values over it.
    Network(cmd::network::NetworkArgs),
    /// Load an edge list and summarize a node activity measure.
    Ingest(cmd::ingest::IngestArgs),
    /// Covariance-sum probe for the dependence condition behind the limits.
    Probe(cmd::probe::ProbeArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// 2 for parameter errors, matching what clap uses for usage errors; 1 for
/// everything else (I/O, unparseable data, numerical failures).
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter { .. } => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<()> {
    let ctx = config::resolve(cli.seed, cli.config.as_deref(), cli.threads)?;
    if let Some(threads) = ctx.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::InvalidParameter { name: "threads", reason: e.to_string() })?;
    }
    match cli.command {
        Command::Simulate(a) => cmd::simulate::run(&ctx, &a),
        Command::Taylor(a) => cmd::taylor::run(&ctx, &a),
        Command::Hill(a) => cmd::hill::run(&ctx, &a),
        Command::Fit(a) => cmd::fit::run(&ctx, &a),
        Command::Network(a) => cmd::network::run(&ctx, &a),
        Command::Ingest(a) => cmd::ingest::run(&ctx, &a),
        Command::Probe(a) => cmd::probe::run(&ctx, &a),
    }
}
