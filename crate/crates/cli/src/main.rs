//! `embedmine`: mine, verify, generate and benchmark from the command line.
//!
//! Exit codes: 0 success, 1 I/O or other failure, 2 usage, 3 dataset parse
//! error, 4 count overflow, 5 verification mismatch.

mod bench;
mod error;
mod gen;
mod input;
mod mine;
mod verify;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use embedmine::miner::{CountMode, MinerConfig};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "embedmine", version, about = "Frequent embedded subtree mining")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mine frequent embedded patterns from a dataset file.
    Mine(mine::MineArgs),
    /// Cross-check the miner against the embedding oracle and the scope-list baseline.
    Verify(verify::VerifyArgs),
    /// Generate a synthetic dataset and its metadata sidecar.
    Gen(gen::GenArgs),
    /// Time the miner and the scope-list baseline over a list of thresholds.
    Bench(bench::BenchArgs),
}

/// Options shared by every command that runs a miner.
#[derive(Args, Debug, Clone)]
pub struct MinerOpts {
    /// Minimum support, a positive integer.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub minsup: u64,
    /// Count supporting trees instead of occurrences.
    #[arg(long)]
    pub per_tree: bool,
    /// Only join patterns from the same prefix class.
    #[arg(long)]
    pub class_merge: bool,
    /// Largest pattern size to grow.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_size: Option<u64>,
    /// Worker threads for top-level branches.
    #[arg(long, default_value_t = 1)]
    pub parallel: usize,
}

impl MinerOpts {
    pub fn config(&self, minsup: u64) -> MinerConfig {
        let mut cfg = MinerConfig::new(minsup);
        cfg.count_mode = if self.per_tree {
            CountMode::PerTree
        } else {
            CountMode::PerOccurrence
        };
        cfg.class_merge = self.class_merge;
        cfg.max_pattern_size = self.max_size.map(|m| m as usize);
        cfg.workers = self.parallel;
        cfg
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Mine(a) => mine::run(a),
        Command::Verify(a) => verify::run(a),
        Command::Gen(a) => gen::run(a),
        Command::Bench(a) => bench::run(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("embedmine: {e:#}");
            ExitCode::from(e.code())
        }
    }
}
