use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use embedmine::encoding::LabelDictionary;
use embedmine::miner::{mine_with, MinedPattern, MinerConfig};
use serde::Serialize;

use crate::error::CliError;
use crate::input::{load_dataset, load_dictionary, sink};
use crate::MinerOpts;

#[derive(Args, Debug)]
pub struct MineArgs {
    /// Dataset file, one tree per line.
    pub input: PathBuf,
    #[command(flatten)]
    pub miner: MinerOpts,
    /// Append the per-tree support as a third column.
    #[arg(long)]
    pub show_per_tree: bool,
    /// Order output by descending support instead of discovery order.
    #[arg(long)]
    pub sort_by_support: bool,
    /// Label dictionary (`id<TAB>name` lines) used to print label names.
    #[arg(long)]
    pub dict: Option<PathBuf>,
    /// Accept dataset lines whose two leading ids differ.
    #[arg(long)]
    pub allow_distinct_ids: bool,
    /// Write patterns here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Write the JSON run report here instead of stderr.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Do not emit a run report.
    #[arg(long, conflicts_with = "report")]
    pub no_report: bool,
}

#[derive(Debug, Serialize)]
pub struct RunParams {
    pub input: String,
    pub minsup: u64,
    pub per_tree: bool,
    pub class_merge: bool,
    pub max_size: Option<u64>,
    pub parallel: usize,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub params: RunParams,
    pub pattern_count: u64,
    pub wall_time_millis: f64,
    pub peak_occ_entries: usize,
    pub peak_occ_bytes: usize,
    pub candidates_generated: u64,
    pub candidates_frequent: u64,
    /// High-water resident set size of the process, where the OS reports it.
    pub peak_rss_bytes: Option<u64>,
}

/// `VmHWM` from `/proc/self/status`; `None` off Linux.
fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

struct LineWriter<'a> {
    out: Box<dyn Write>,
    cfg: &'a MinerConfig,
    dict: Option<&'a LabelDictionary>,
    per_tree: bool,
}

impl LineWriter<'_> {
    fn line(&mut self, m: &MinedPattern) -> std::io::Result<()> {
        let enc = m.encoding();
        match self.dict {
            Some(d) => write!(self.out, "{}", enc.display_with(d))?,
            None => write!(self.out, "{enc}")?,
        }
        write!(self.out, "\t{}", m.support_in(self.cfg.count_mode))?;
        if self.per_tree {
            write!(self.out, "\t{}", m.per_tree_support)?;
        }
        writeln!(self.out)
    }
}

pub fn run(args: MineArgs) -> Result<(), CliError> {
    let d = load_dataset(&args.input, args.allow_distinct_ids)?;
    let dict = args.dict.as_deref().map(load_dictionary).transpose()?;
    let cfg = args.miner.config(args.miner.minsup);
    let mut w = LineWriter {
        out: sink(args.output.as_ref())?,
        cfg: &cfg,
        dict: dict.as_ref().or(d.dictionary()),
        per_tree: args.show_per_tree,
    };

    let start = Instant::now();
    let mut held = Vec::new();
    let mut io_err = None;
    let mut count = 0u64;
    let stats = mine_with(&d, &cfg, |m| {
        count += 1;
        if args.sort_by_support {
            held.push(m);
        } else if io_err.is_none() {
            io_err = w.line(&m).err();
        }
    })?;
    let elapsed = start.elapsed();
    if let Some(e) = io_err {
        return Err(e.into());
    }
    // stable: ties keep discovery order
    held.sort_by_key(|m| std::cmp::Reverse(m.support_in(cfg.count_mode)));
    for m in &held {
        w.line(m)?;
    }
    w.out.flush()?;

    if args.no_report {
        return Ok(());
    }
    let report = RunReport {
        params: RunParams {
            input: args.input.display().to_string(),
            minsup: cfg.minsup,
            per_tree: args.miner.per_tree,
            class_merge: cfg.class_merge,
            max_size: args.miner.max_size,
            parallel: cfg.workers,
        },
        pattern_count: count,
        wall_time_millis: elapsed.as_secs_f64() * 1e3,
        peak_occ_entries: stats.peak_live_entries,
        peak_occ_bytes: stats.peak_live_bytes,
        candidates_generated: stats.candidates_generated,
        candidates_frequent: stats.candidates_frequent,
        peak_rss_bytes: peak_rss_bytes(),
    };
    let mut out = match &args.report {
        Some(p) => sink(Some(p))?,
        None => Box::new(std::io::stderr()),
    };
    serde_json::to_writer(&mut out, &report)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}
