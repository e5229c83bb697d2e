use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::Args;
use embedmine::encoding::{Dataset, PatternString};
use embedmine::miner::mine;
use embedmine::oracle::{
    oracle_mine_capped, pattern_set, scopelist_mine, OracleError, PatternSet, DEFAULT_GUARD,
};
use embedmine::synth::random_forest;

use crate::error::CliError;
use crate::input::{display_name, load_dataset};
use crate::MinerOpts;

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Dataset files to check.
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub miner: MinerOpts,
    /// Also check this many random forests, seeded from `--seed` upwards.
    #[arg(long, default_value_t = 0)]
    pub random: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trees per random forest.
    #[arg(long, default_value_t = 20)]
    pub random_trees: usize,
    /// Largest tree in a random forest.
    #[arg(long, default_value_t = 10)]
    pub random_vertices: usize,
    /// Labels used by random forests.
    #[arg(long, default_value_t = 3)]
    pub random_labels: u32,
    /// Cap on embeddings or scope-list elements before a check is skipped.
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    pub guard: u64,
    #[arg(long)]
    pub allow_distinct_ids: bool,
    /// Perturb the miner's output before comparing (harness self-test).
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

enum Outcome {
    Agree(usize),
    Skipped(u64),
    Disagree(Vec<String>),
}

fn diff(name: &str, reference: &PatternSet, other: &PatternSet) -> Vec<String> {
    let keys: BTreeSet<&PatternString> = reference.keys().chain(other.keys()).collect();
    let show = |v: Option<&u64>| v.map_or("-".to_string(), u64::to_string);
    keys.into_iter()
        .filter(|k| reference.get(k) != other.get(k))
        .map(|k| {
            format!(
                "  {k}\tmine={}\t{name}={}",
                show(reference.get(k)),
                show(other.get(k))
            )
        })
        .collect()
}

fn check(d: &Dataset, args: &VerifyArgs) -> Result<Outcome, CliError> {
    let cfg = args.miner.config(args.miner.minsup);
    let mut mined = pattern_set(&mine(d, &cfg)?.patterns, cfg.count_mode);
    if args.inject_fault {
        match mined.values_mut().next() {
            Some(v) => *v += 1,
            None => {
                mined.insert("0".parse().expect("valid encoding"), 1);
            }
        }
    }
    let oracle = match oracle_mine_capped(d, &cfg, args.guard) {
        Err(OracleError::ExplosionGuard { cap }) => return Ok(Outcome::Skipped(cap)),
        r => r?,
    };
    let baseline = match scopelist_mine(d, &cfg, args.guard) {
        Err(OracleError::ExplosionGuard { cap }) => return Ok(Outcome::Skipped(cap)),
        r => pattern_set(&r?.patterns, cfg.count_mode),
    };
    let mut lines = diff("oracle", &mined, &oracle);
    lines.extend(diff("scopelist", &mined, &baseline));
    Ok(if lines.is_empty() {
        Outcome::Agree(mined.len())
    } else {
        Outcome::Disagree(lines)
    })
}

pub fn run(args: VerifyArgs) -> Result<(), CliError> {
    let mut jobs: Vec<(String, Dataset)> = Vec::new();
    for p in &args.inputs {
        jobs.push((display_name(p), load_dataset(p, args.allow_distinct_ids)?));
    }
    for i in 0..args.random {
        let seed = args.seed.wrapping_add(i);
        let d = random_forest(
            seed,
            args.random_trees,
            args.random_vertices.max(1),
            args.random_labels.max(1),
        );
        jobs.push((format!("random:{seed}"), d));
    }

    let mut failures = 0;
    for (name, d) in &jobs {
        match check(d, &args)? {
            Outcome::Agree(n) => println!("OK\t{name}\t{n} patterns"),
            Outcome::Skipped(cap) => println!("SKIPPED\t{name}\texplosion guard (cap {cap})"),
            Outcome::Disagree(lines) => {
                failures += 1;
                println!("MISMATCH\t{name}");
                for l in lines {
                    println!("{l}");
                }
            }
        }
    }
    if failures > 0 {
        return Err(CliError::Mismatch(failures));
    }
    Ok(())
}
