//! `commit-density`: mine commit size features from git repositories and
//! classify commits by maintenance activity.
//!
//! stdout carries one JSON object per line; diagnostics go to stderr.
//! Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{Context, UsageError};

#[derive(Debug, Parser)]
#[command(name = "commit-density", version, about = "Commit size, source code density and maintenance activity classification")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, env = "COMMIT_DENSITY_CONFIG")]
    config: Option<PathBuf>,
    /// Base seed; every stochastic step derives its own seed from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output directory (for `extract`, a path ending in .csv names the file).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mine per-commit size features from a repository.
    Extract(commands::extract::Args),
    /// Join a labeled CSV with mined size features.
    Merge(commands::merge::Args),
    /// Descriptive statistics of commit sizes.
    Stats(commands::stats::Args),
    /// Train a model and report its training performance.
    Train(commands::train::Args),
    /// Recursive feature elimination with resampling.
    Rfe(commands::rfe::Args),
    /// Score a model, or a predictions file, against labels.
    Evaluate(commands::evaluate::Args),
    /// Label the commits of a repository with a trained model.
    Predict(commands::predict::Args),
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let ctx = Context::resolve(cli.config.as_deref(), cli.seed, cli.jobs, cli.out)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.jobs)
        .build()?
        .install(|| match cli.command {
            Command::Extract(a) => commands::extract::run(&ctx, a),
            Command::Merge(a) => commands::merge::run(&ctx, a),
            Command::Stats(a) => commands::stats::run(&ctx, a),
            Command::Train(a) => commands::train::run(&ctx, a),
            Command::Rfe(a) => commands::rfe::run(&ctx, a),
            Command::Evaluate(a) => commands::evaluate::run(&ctx, a),
            Command::Predict(a) => commands::predict::run(&ctx, a),
        })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let config = err.chain().any(|e| {
        e.downcast_ref::<UsageError>().is_some()
            || e.downcast_ref::<commit_density::Error>().is_some_and(|e| e.is_config())
    });
    if config {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
