use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use embedmine::encoding::Dataset;
use embedmine::miner::{mine, MinedPattern};
use embedmine::oracle::{scopelist_mine, OracleError, DEFAULT_GUARD};
use serde::Serialize;

use crate::error::CliError;
use crate::input::{display_name, load_dataset, sink};

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Dataset files.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Comma-separated thresholds, each a positive integer.
    #[arg(long, value_delimiter = ',', required = true,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub minsup: Vec<u64>,
    #[arg(long)]
    pub per_tree: bool,
    #[arg(long)]
    pub class_merge: bool,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_size: Option<u64>,
    /// Cap on live scope-list elements.
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    pub guard: u64,
    /// Skip the scope-list baseline.
    #[arg(long)]
    pub skip_baseline: bool,
    #[arg(long)]
    pub allow_distinct_ids: bool,
    /// Write records here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Record<'a> {
    dataset: &'a str,
    minsup: u64,
    engine: &'static str,
    status: &'static str,
    wall_time_millis: f64,
    pattern_count: Option<u64>,
    candidates_generated: Option<u64>,
    candidates_frequent: Option<u64>,
    /// Live occ entries or scope-list elements at the peak.
    peak_entries: Option<u64>,
    /// Entries summed over the largest patterns found.
    largest_pattern_size: Option<usize>,
    largest_pattern_entries: Option<u64>,
    total_elements: Option<u64>,
}

impl Record<'_> {
    fn largest(&mut self, patterns: &[MinedPattern]) {
        let size = patterns.iter().map(|m| m.pattern.len()).max();
        self.largest_pattern_size = size;
        self.largest_pattern_entries = size.map(|s| {
            patterns
                .iter()
                .filter(|m| m.pattern.len() == s)
                .map(|m| m.occ_entries as u64)
                .sum()
        });
    }
}

fn blank<'a>(dataset: &'a str, minsup: u64, engine: &'static str) -> Record<'a> {
    Record {
        dataset,
        minsup,
        engine,
        status: "ok",
        wall_time_millis: 0.0,
        pattern_count: None,
        candidates_generated: None,
        candidates_frequent: None,
        peak_entries: None,
        largest_pattern_size: None,
        largest_pattern_entries: None,
        total_elements: None,
    }
}

fn bench_one<'a>(
    name: &'a str,
    d: &Dataset,
    minsup: u64,
    args: &BenchArgs,
) -> Result<Vec<Record<'a>>, CliError> {
    let mut cfg = embedmine::miner::MinerConfig::new(minsup);
    cfg.class_merge = args.class_merge;
    cfg.max_pattern_size = args.max_size.map(|m| m as usize);
    if args.per_tree {
        cfg.count_mode = embedmine::miner::CountMode::PerTree;
    }

    let mut records = Vec::new();
    let start = Instant::now();
    let out = mine(d, &cfg)?;
    let mut r = blank(name, minsup, "occlist");
    r.wall_time_millis = start.elapsed().as_secs_f64() * 1e3;
    r.pattern_count = Some(out.patterns.len() as u64);
    r.candidates_generated = Some(out.stats.candidates_generated);
    r.candidates_frequent = Some(out.stats.candidates_frequent);
    r.peak_entries = Some(out.stats.peak_live_entries as u64);
    r.largest(&out.patterns);
    records.push(r);

    if !args.skip_baseline {
        let start = Instant::now();
        let res = scopelist_mine(d, &cfg, args.guard);
        let mut r = blank(name, minsup, "scopelist");
        r.wall_time_millis = start.elapsed().as_secs_f64() * 1e3;
        match res {
            Ok(out) => {
                r.pattern_count = Some(out.patterns.len() as u64);
                r.candidates_generated = Some(out.stats.candidates_generated);
                r.candidates_frequent = Some(out.stats.candidates_frequent);
                r.peak_entries = Some(out.stats.peak_live_elements);
                r.total_elements = Some(out.stats.total_elements);
                r.largest(&out.patterns);
            }
            Err(OracleError::ExplosionGuard { .. }) => r.status = "guard",
            Err(e) => return Err(e.into()),
        }
        records.push(r);
    }
    Ok(records)
}

pub fn run(args: BenchArgs) -> Result<(), CliError> {
    let mut out = sink(args.output.as_ref())?;
    for path in &args.inputs {
        let d = load_dataset(path, args.allow_distinct_ids)?;
        let name = display_name(path);
        for &minsup in &args.minsup {
            for r in bench_one(&name, &d, minsup, &args)? {
                serde_json::to_writer(&mut out, &r)?;
                writeln!(out)?;
            }
            out.flush()?;
        }
    }
    Ok(())
}
