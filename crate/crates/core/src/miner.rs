//! Depth-first frequent pattern enumeration over occ-lists.
//!
//! Every frequent pattern is extended with every frequent label at every
//! rightmost-path vertex, outer loop over labels in ascending order and inner
//! loop over attach rdepths from the root down. Attaching below the rightmost
//! vertex is a leaf join, anywhere else an inner join. A candidate is kept
//! when its support reaches `minsup`; only kept candidates are extended, so a
//! pattern is reported iff it is frequent and the pattern obtained by
//! removing its rightmost vertex was reported.

use std::collections::HashSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::encoding::{encode_pattern, Dataset, PatternString};
use crate::occ::{
    count_extensions, inner_join, label_occlists, leaf_join, ExtensionCounts, LabelSlots, OccError,
    OccList,
};
use crate::tree::{Label, Pattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CountMode {
    #[default]
    PerOccurrence,
    PerTree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinerConfig {
    pub minsup: u64,
    /// Only generate candidates whose two generating subtrees are frequent.
    pub class_merge: bool,
    pub max_pattern_size: Option<usize>,
    pub count_mode: CountMode,
    /// Worker threads for top-level branches; 0 or 1 runs sequentially.
    pub workers: usize,
}

impl MinerConfig {
    pub fn new(minsup: u64) -> Self {
        MinerConfig {
            minsup,
            class_merge: false,
            max_pattern_size: None,
            count_mode: CountMode::PerOccurrence,
            workers: 1,
        }
    }

    pub fn validate(&self) -> Result<(), MineError> {
        if self.minsup == 0 {
            return Err(MineError::InvalidMinsup);
        }
        if self.max_pattern_size == Some(0) {
            return Err(MineError::InvalidMaxSize);
        }
        Ok(())
    }

    pub(crate) fn may_extend(&self, size: usize) -> bool {
        self.max_pattern_size.is_none_or(|m| size < m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MineError {
    #[error("minsup must be a positive integer")]
    InvalidMinsup,
    #[error("max pattern size must be positive")]
    InvalidMaxSize,
    #[error("occurrence count overflow while counting pattern {pattern}")]
    CountOverflow { pattern: PatternString },
    #[error(transparent)]
    Occ(#[from] OccError),
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinedPattern {
    pub pattern: Pattern,
    pub support: u64,
    pub per_tree_support: u64,
    /// Entries in the pattern's occurrence list.
    pub occ_entries: usize,
    pub max_multiplicity: u64,
}

impl MinedPattern {
    pub fn encoding(&self) -> PatternString {
        encode_pattern(&self.pattern)
    }

    /// The support value the run was thresholded on.
    pub fn support_in(&self, mode: CountMode) -> u64 {
        match mode {
            CountMode::PerOccurrence => self.support,
            CountMode::PerTree => self.per_tree_support,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MinerStats {
    pub candidates_generated: u64,
    pub candidates_frequent: u64,
    /// Largest number of occ entries alive at once.
    pub peak_live_entries: usize,
    pub peak_live_bytes: usize,
}

impl MinerStats {
    fn absorb_branch(&mut self, other: &MinerStats, base_entries: usize, base_bytes: usize) {
        self.candidates_generated += other.candidates_generated;
        self.candidates_frequent += other.candidates_frequent;
        self.peak_live_entries = self.peak_live_entries.max(base_entries + other.peak_live_entries);
        self.peak_live_bytes = self.peak_live_bytes.max(base_bytes + other.peak_live_bytes);
    }
}

#[derive(Debug, Clone, Default)]
pub struct MineOutcome {
    pub patterns: Vec<MinedPattern>,
    pub stats: MinerStats,
}

/// Key of the equivalence class of `p`: the encoding of `p` without its
/// rightmost vertex. `None` for single-vertex patterns.
pub fn prefix_class_key(p: &Pattern) -> Option<PatternString> {
    p.without_rightmost().map(|q| encode_pattern(&q))
}

/// Candidate `(label, attach rdepth)` pairs for extending `p`, in the order
/// they are evaluated.
///
/// Without a class every label is tried at every rdepth. With `class` (the
/// `(label, rdepth)` of the frequent patterns sharing `p`'s prefix, `p`
/// included) a label may attach at rdepth `r < d` only if it was a frequent
/// class member at `r`, and below the rightmost vertex (rdepth `d`) only if it
/// was a member at the same rdepth as `p`'s own last vertex.
pub fn enumerate_extensions(
    p: &Pattern,
    labels: &[Label],
    class: Option<&[(Label, usize)]>,
) -> Vec<(Label, usize)> {
    let d = p.rightmost_depth();
    let members: Option<HashSet<(Label, usize)>> =
        class.filter(|_| p.len() > 1).map(|c| c.iter().copied().collect());
    let mut out = Vec::new();
    for &label in labels {
        for i in 0..=d {
            let allowed = match &members {
                None => true,
                Some(m) if i < d => m.contains(&(label, i)),
                Some(m) => m.contains(&(label, d - 1)),
            };
            if allowed {
                out.push((label, i));
            }
        }
    }
    out
}

struct Engine<'a, F> {
    cfg: &'a MinerConfig,
    labels: &'a [(Label, OccList)],
    label_ids: Vec<Label>,
    slots: &'a LabelSlots,
    stats: MinerStats,
    live_entries: usize,
    live_bytes: usize,
    sink: F,
}

struct Child {
    label: Label,
    rdepth: usize,
    pattern: Pattern,
    list: OccList,
}

impl<'a, F: FnMut(MinedPattern)> Engine<'a, F> {
    fn new(
        cfg: &'a MinerConfig,
        labels: &'a [(Label, OccList)],
        slots: &'a LabelSlots,
        sink: F,
    ) -> Self {
        let live_entries = labels.iter().map(|(_, l)| l.len()).sum();
        let live_bytes = labels.iter().map(|(_, l)| l.heap_bytes()).sum();
        Engine {
            cfg,
            labels,
            label_ids: labels.iter().map(|(l, _)| *l).collect(),
            slots,
            stats: MinerStats {
                peak_live_entries: live_entries,
                peak_live_bytes: live_bytes,
                ..Default::default()
            },
            live_entries,
            live_bytes,
            sink,
        }
    }

    fn emit(&mut self, pattern: &Pattern, list: &OccList) -> Result<(), MineError> {
        let support = list.support().map_err(|_| MineError::CountOverflow {
            pattern: encode_pattern(pattern),
        })?;
        (self.sink)(MinedPattern {
            pattern: pattern.clone(),
            support,
            per_tree_support: list.per_tree_support(),
            occ_entries: list.len(),
            max_multiplicity: list.max_multiplicity(),
        });
        Ok(())
    }

    /// Support of a candidate read from the one-pass counts.
    fn counted(&self, counts: &ExtensionCounts, rdepth: usize, slot: usize) -> u64 {
        match self.cfg.count_mode {
            CountMode::PerOccurrence => counts.occurrences(rdepth, slot),
            CountMode::PerTree => counts.trees(rdepth, slot),
        }
    }

    /// Joins a candidate already counted as frequent.
    fn evaluate(
        &mut self,
        pattern: &Pattern,
        list: &OccList,
        label: Label,
        rdepth: usize,
    ) -> Result<Option<Child>, MineError> {
        let candidate = pattern.rextend(label, rdepth).expect("rdepth within rightmost path");
        let vertex = &self.labels[self.label_ids.binary_search(&label).expect("known label")].1;
        let joined = if rdepth == pattern.rightmost_depth() {
            leaf_join(list, vertex)
        } else {
            inner_join(list, vertex, rdepth)
        };
        let joined = joined.map_err(|e| match e {
            OccError::CountOverflow => MineError::CountOverflow {
                pattern: encode_pattern(&candidate),
            },
            other => MineError::Occ(other),
        })?;
        self.stats.peak_live_entries = self.stats.peak_live_entries.max(self.live_entries + joined.len());
        self.stats.peak_live_bytes = self.stats.peak_live_bytes.max(self.live_bytes + joined.heap_bytes());
        let value = measure(&joined, self.cfg.count_mode).map_err(|_| MineError::CountOverflow {
            pattern: encode_pattern(&candidate),
        })?;
        debug_assert!(value >= self.cfg.minsup, "count pass and join disagree");
        if value < self.cfg.minsup {
            return Ok(None);
        }
        self.stats.candidates_frequent += 1;
        Ok(Some(Child {
            label,
            rdepth,
            pattern: candidate,
            list: joined,
        }))
    }

    fn hold(&mut self, list: &OccList) {
        self.live_entries += list.len();
        self.live_bytes += list.heap_bytes();
    }

    fn release(&mut self, list: &OccList) {
        self.live_entries -= list.len();
        self.live_bytes -= list.heap_bytes();
    }

    fn extend(&mut self, pattern: &Pattern, list: &OccList) -> Result<(), MineError> {
        if !self.cfg.may_extend(pattern.len()) {
            return Ok(());
        }
        let d = pattern.rightmost_depth();
        let counts = count_extensions(list, self.slots);
        for li in 0..self.label_ids.len() {
            let label = self.label_ids[li];
            for rdepth in 0..=d {
                self.stats.candidates_generated += 1;
                if self.counted(&counts, rdepth, li) < self.cfg.minsup {
                    continue;
                }
                if let Some(child) = self.evaluate(pattern, list, label, rdepth)? {
                    self.hold(&child.list);
                    self.emit(&child.pattern, &child.list)?;
                    self.extend(&child.pattern, &child.list)?;
                    self.release(&child.list);
                }
            }
        }
        Ok(())
    }

    fn extend_in_class(
        &mut self,
        pattern: &Pattern,
        list: &OccList,
        class: Option<&[(Label, usize)]>,
    ) -> Result<(), MineError> {
        if !self.cfg.may_extend(pattern.len()) {
            return Ok(());
        }
        let counts = count_extensions(list, self.slots);
        let mut children = Vec::new();
        for (label, rdepth) in enumerate_extensions(pattern, &self.label_ids, class) {
            self.stats.candidates_generated += 1;
            let slot = self.label_ids.binary_search(&label).expect("known label");
            if self.counted(&counts, rdepth, slot) < self.cfg.minsup {
                continue;
            }
            if let Some(child) = self.evaluate(pattern, list, label, rdepth)? {
                self.hold(&child.list);
                children.push(child);
            }
        }
        let members: Vec<(Label, usize)> = children.iter().map(|c| (c.label, c.rdepth)).collect();
        for child in children {
            self.emit(&child.pattern, &child.list)?;
            self.extend_in_class(&child.pattern, &child.list, Some(&members))?;
            self.release(&child.list);
        }
        Ok(())
    }

    fn extend_root(&mut self, index: usize) -> Result<(), MineError> {
        let (label, ref list) = self.labels[index];
        let pattern = Pattern::single(label);
        if self.cfg.class_merge {
            self.extend_in_class(&pattern, list, None)
        } else {
            self.extend(&pattern, list)
        }
    }
}

fn measure(list: &OccList, mode: CountMode) -> Result<u64, OccError> {
    match mode {
        CountMode::PerOccurrence => list.support(),
        CountMode::PerTree => Ok(list.per_tree_support()),
    }
}

/// Mines `d`, handing every frequent pattern to `sink` in discovery order:
/// all frequent single labels first, then the depth-first extensions of each.
pub fn mine_with<F: FnMut(MinedPattern)>(
    d: &Dataset,
    cfg: &MinerConfig,
    mut sink: F,
) -> Result<MinerStats, MineError> {
    cfg.validate()?;
    let all = label_occlists(d);
    let mut stats = MinerStats::default();
    let mut frequent = Vec::new();
    for (label, list) in all {
        stats.candidates_generated += 1;
        if measure(&list, cfg.count_mode)? >= cfg.minsup {
            stats.candidates_frequent += 1;
            frequent.push((label, list));
        }
    }
    let label_ids: Vec<Label> = frequent.iter().map(|(l, _)| *l).collect();
    let slots = LabelSlots::new(d, &label_ids);
    let base_entries: usize = frequent.iter().map(|(_, l)| l.len()).sum();
    let base_bytes: usize = frequent.iter().map(|(_, l)| l.heap_bytes()).sum();
    stats.peak_live_entries = base_entries;
    stats.peak_live_bytes = base_bytes;
    for (label, list) in &frequent {
        sink(MinedPattern {
            pattern: Pattern::single(*label),
            support: list.support()?,
            per_tree_support: list.per_tree_support(),
            occ_entries: list.len(),
            max_multiplicity: list.max_multiplicity(),
        });
    }

    if cfg.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| MineError::Pool(e.to_string()))?;
        let branches: Vec<Result<(Vec<MinedPattern>, MinerStats), MineError>> =
            pool.install(|| {
                (0..frequent.len())
                    .into_par_iter()
                    .map(|i| {
                        let mut found = Vec::new();
                        let mut engine = Engine::new(cfg, &frequent, &slots, |m| found.push(m));
                        engine.extend_root(i)?;
                        let branch = engine.stats;
                        Ok((found, branch))
                    })
                    .collect()
            });
        for branch in branches {
            let (found, branch_stats) = branch?;
            // branch peaks already include the shared single-label lists
            stats.absorb_branch(&branch_stats, 0, 0);
            found.into_iter().for_each(&mut sink);
        }
    } else {
        let mut engine = Engine::new(cfg, &frequent, &slots, &mut sink);
        for i in 0..frequent.len() {
            engine.extend_root(i)?;
        }
        let branch = engine.stats;
        stats.absorb_branch(&branch, 0, 0);
    }
    Ok(stats)
}

/// Mines `d` and collects the frequent patterns in discovery order.
pub fn mine(d: &Dataset, cfg: &MinerConfig) -> Result<MineOutcome, MineError> {
    let mut patterns = Vec::new();
    let stats = mine_with(d, cfg, |m| patterns.push(m))?;
    Ok(MineOutcome { patterns, stats })
}
