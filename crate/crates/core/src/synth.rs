//! Synthetic tree databases in the style of web browsing logs.
//!
//! A master tree of `master_size` vertices is grown by attaching each new
//! vertex, as a last child, to a uniformly chosen vertex that still has room
//! (depth below `max_depth`, fanout below `max_fanout`). Every dataset tree is
//! then a sample of the master that keeps the root and keeps each child of a
//! kept vertex independently with probability `keep_probability`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoding::Dataset;
use crate::tree::{DatabaseTree, Label, VertexId};

pub const RNG_ALGORITHM: &str = "chacha8";
pub const GENERATOR_VERSION: &str = concat!("embedmine-synth/", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub n_labels: u32,
    pub master_size: usize,
    pub max_fanout: usize,
    pub max_depth: usize,
    pub n_trees: usize,
    pub seed: u64,
    pub keep_probability: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n_labels: 100,
            master_size: 10_000,
            max_fanout: 10,
            max_depth: 10,
            n_trees: 100_000,
            seed: 0,
            keep_probability: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("invalid generator parameter: {0}")]
    InvalidParams(String),
    #[error("{size} vertices do not fit within depth {depth} and fanout {fanout}")]
    InfeasibleShape {
        size: usize,
        depth: usize,
        fanout: usize,
    },
}

/// Sidecar record that makes a generated dataset reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenMetadata {
    pub params: GenParams,
    pub rng: String,
    pub generator: String,
}

impl GenMetadata {
    pub fn for_params(params: &GenParams) -> Self {
        GenMetadata {
            params: params.clone(),
            rng: RNG_ALGORITHM.into(),
            generator: GENERATOR_VERSION.into(),
        }
    }
}

/// Largest tree with the given depth and fanout bounds, saturating.
fn capacity(depth: usize, fanout: usize) -> usize {
    let mut total: usize = 1;
    let mut level: usize = 1;
    for _ in 0..depth {
        level = level.saturating_mul(fanout);
        total = total.saturating_add(level);
        if fanout == 1 && total > depth + 1 {
            break;
        }
    }
    total
}

impl GenParams {
    pub fn validate(&self) -> Result<(), SynthError> {
        let positive = [
            ("n_labels", self.n_labels as usize),
            ("master_size", self.master_size),
            ("max_fanout", self.max_fanout),
            ("max_depth", self.max_depth),
            ("n_trees", self.n_trees),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(SynthError::InvalidParams(format!("{name} must be at least 1")));
        }
        if !(0.0..=1.0).contains(&self.keep_probability) {
            return Err(SynthError::InvalidParams(
                "keep_probability must lie in [0, 1]".into(),
            ));
        }
        if self.master_size > capacity(self.max_depth, self.max_fanout) {
            return Err(SynthError::InfeasibleShape {
                size: self.master_size,
                depth: self.max_depth,
                fanout: self.max_fanout,
            });
        }
        Ok(())
    }
}

/// The master tree, children kept in insertion (left to right) order.
#[derive(Debug, Clone)]
pub struct MasterTree {
    pub labels: Vec<Label>,
    pub children: Vec<Vec<usize>>,
    pub depth: Vec<usize>,
}

fn grow_master(params: &GenParams, rng: &mut ChaCha8Rng) -> MasterTree {
    let m = params.master_size;
    let mut labels = Vec::with_capacity(m);
    let mut children: Vec<Vec<usize>> = Vec::with_capacity(m);
    let mut depth = Vec::with_capacity(m);
    labels.push(rng.gen_range(0..params.n_labels));
    children.push(Vec::new());
    depth.push(0);
    let mut open: Vec<usize> = Vec::new();
    if params.max_depth > 0 {
        open.push(0);
    }
    while labels.len() < m {
        let slot = rng.gen_range(0..open.len());
        let parent = open[slot];
        let v = labels.len();
        labels.push(rng.gen_range(0..params.n_labels));
        children.push(Vec::new());
        depth.push(depth[parent] + 1);
        children[parent].push(v);
        if children[parent].len() >= params.max_fanout {
            open.swap_remove(slot);
        }
        if depth[v] < params.max_depth {
            open.push(v);
        }
    }
    MasterTree {
        labels,
        children,
        depth,
    }
}

/// Keeps the root and each child of a kept vertex with probability `keep`.
fn sample_subtree(
    master: &MasterTree,
    keep: f64,
    tid: u32,
    rng: &mut ChaCha8Rng,
) -> DatabaseTree {
    let mut labels = vec![master.labels[0]];
    let mut parents: Vec<Option<VertexId>> = vec![None];
    // (master vertex, emitted id, next child index)
    let mut stack: Vec<(usize, VertexId, usize)> = vec![(0, 0, 0)];
    while let Some(top) = stack.last_mut() {
        let (mv, id, next) = *top;
        if next == master.children[mv].len() {
            stack.pop();
            continue;
        }
        top.2 += 1;
        let c = master.children[mv][next];
        if rng.gen_bool(keep) {
            let cid = labels.len() as VertexId;
            labels.push(master.labels[c]);
            parents.push(Some(id));
            stack.push((c, cid, 0));
        }
    }
    DatabaseTree::build(tid, labels, parents).expect("sampled trees are in preorder")
}

pub fn generate_master(params: &GenParams) -> Result<MasterTree, SynthError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    Ok(grow_master(params, &mut rng))
}

/// Generates `n_trees` trees; the output is a pure function of `params`.
pub fn generate(params: &GenParams) -> Result<Dataset, SynthError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let master = grow_master(params, &mut rng);
    let trees = (0..params.n_trees)
        .map(|tid| sample_subtree(&master, params.keep_probability, tid as u32, &mut rng))
        .collect();
    Ok(Dataset::new(trees).expect("tids are distinct"))
}

/// A forest of `n_trees` independent random trees, for testing. Sizes are
/// uniform in `1..=max_vertices`; each new vertex in preorder hangs off a
/// uniformly chosen vertex of the current rightmost path.
pub fn random_forest(seed: u64, n_trees: usize, max_vertices: usize, n_labels: u32) -> Dataset {
    assert!(max_vertices >= 1 && n_labels >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trees = (0..n_trees as u32)
        .map(|tid| {
            let size = rng.gen_range(1..=max_vertices);
            let mut labels = vec![rng.gen_range(0..n_labels)];
            let mut parents: Vec<Option<VertexId>> = vec![None];
            let mut spine: Vec<VertexId> = vec![0];
            for v in 1..size as VertexId {
                spine.truncate(rng.gen_range(1..=spine.len()));
                parents.push(spine.last().copied());
                labels.push(rng.gen_range(0..n_labels));
                spine.push(v);
            }
            DatabaseTree::build(tid, labels, parents).expect("spine parents give preorder")
        })
        .collect();
    Dataset::new(trees).expect("tids are distinct")
}
