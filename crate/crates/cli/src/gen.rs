use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use embedmine::encoding::write_dataset;
use embedmine::synth::{generate, GenMetadata, GenParams};

use crate::error::CliError;
use crate::input::sink;

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Number of distinct labels (N).
    #[arg(long, default_value_t = 100)]
    pub n_labels: u32,
    /// Vertices in the master tree (M).
    #[arg(long, default_value_t = 10_000)]
    pub master_size: usize,
    /// Maximum fanout of the master tree (F).
    #[arg(long, default_value_t = 10)]
    pub max_fanout: usize,
    /// Maximum depth of the master tree (D).
    #[arg(long, default_value_t = 10)]
    pub max_depth: usize,
    /// Number of trees to emit (T).
    #[arg(long, default_value_t = 100_000)]
    pub n_trees: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Probability of keeping each child while sampling a subtree.
    #[arg(long, default_value_t = 0.5)]
    pub keep_probability: f64,
    /// Dataset file to write; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Metadata sidecar path; defaults to `<output>.meta.json`.
    #[arg(long)]
    pub meta: Option<PathBuf>,
}

pub fn run(args: GenArgs) -> Result<(), CliError> {
    let params = GenParams {
        n_labels: args.n_labels,
        master_size: args.master_size,
        max_fanout: args.max_fanout,
        max_depth: args.max_depth,
        n_trees: args.n_trees,
        seed: args.seed,
        keep_probability: args.keep_probability,
    };
    let d = generate(&params).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut out = sink(args.output.as_ref())?;
    write_dataset(&d, &mut out)?;
    out.flush()?;

    let meta_path = args.meta.or_else(|| {
        args.output.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".meta.json");
            PathBuf::from(s)
        })
    });
    if let Some(p) = meta_path {
        let json = serde_json::to_string_pretty(&GenMetadata::for_params(&params))?;
        fs::write(&p, json + "\n")
            .with_context(|| format!("cannot write {}", p.display()))
            .map_err(CliError::Other)?;
    }
    Ok(())
}
