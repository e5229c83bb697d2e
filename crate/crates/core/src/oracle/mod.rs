//! Reference engines used to check the occ-list miner.
//!
//! [`oracle_mine`] counts every candidate by enumerating its embeddings one by
//! one. [`scopelist_mine`] is a vertical miner that keeps one list element per
//! embedding, the storage scheme occ-lists compress. Both grow candidates in
//! the same order as [`crate::miner::mine`] so outputs can be compared
//! directly, but neither shares any counting code with it.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::encoding::{Dataset, PatternString};
use crate::miner::{enumerate_extensions, CountMode, MineError, MinedPattern, MinerConfig};
use crate::tree::{Label, Pattern};

mod embed;
mod scopelist;

pub use embed::{
    brute_force_embeddings, count_embeddings, enumerate_embeddings, enumerate_embeddings_capped,
    for_each_embedding, is_embedding, Embedding,
};
pub use scopelist::{scopelist_mine, ScopeListOutcome, ScopeListStats};

/// Default cap on embeddings or scope-list elements.
pub const DEFAULT_GUARD: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("explosion guard tripped (cap {cap})")]
    ExplosionGuard { cap: u64 },
    #[error(transparent)]
    Mine(#[from] MineError),
}

/// Mined patterns keyed by encoding, with the support used for thresholding.
pub type PatternSet = BTreeMap<PatternString, u64>;

pub fn pattern_set(found: &[MinedPattern], mode: CountMode) -> PatternSet {
    found
        .iter()
        .map(|m| (m.encoding(), m.support_in(mode)))
        .collect()
}

/// A counting back end for [`grow`].
pub(crate) trait Counter {
    type State;

    /// States of all single-label patterns, ascending by label.
    fn roots(&mut self) -> Result<Vec<(Label, Self::State)>, OracleError>;

    fn extend(
        &mut self,
        parent: &Pattern,
        state: &Self::State,
        candidate: &Pattern,
        rdepth: usize,
    ) -> Result<Self::State, OracleError>;

    /// (per-occurrence support, per-tree support)
    fn supports(&self, state: &Self::State) -> (u64, u64);

    fn entries(&self, state: &Self::State) -> usize;

    /// Supports of all extensions of `parent` in one pass, as
    /// `(occurrences, trees)` at `rdepth * labels.len() + label index`.
    /// `None` sends every candidate through [`Counter::extend`].
    fn precount(
        &mut self,
        _parent: &Pattern,
        _state: &Self::State,
        _labels: &[Label],
    ) -> Option<Vec<(u64, u64)>> {
        None
    }

    /// A single-label state that survived the threshold and stays alive.
    fn retain_root(&mut self, _state: &Self::State) {}

    fn release(&mut self, _state: &Self::State) {}

    fn note_candidate(&mut self, _frequent: bool) {}
}

struct Growth<'a, C: Counter> {
    counter: C,
    cfg: &'a MinerConfig,
    labels: Vec<Label>,
    out: Vec<MinedPattern>,
}

impl<C: Counter> Growth<'_, C> {
    fn record(&mut self, p: &Pattern, state: &C::State) {
        let (support, per_tree_support) = self.counter.supports(state);
        self.out.push(MinedPattern {
            pattern: p.clone(),
            support,
            per_tree_support,
            occ_entries: self.counter.entries(state),
            max_multiplicity: u64::from(support > 0),
        });
    }

    fn frequent(&self, state: &C::State) -> bool {
        self.passes(self.counter.supports(state))
    }

    fn passes(&self, (occ, tree): (u64, u64)) -> bool {
        let value = match self.cfg.count_mode {
            CountMode::PerOccurrence => occ,
            CountMode::PerTree => tree,
        };
        value >= self.cfg.minsup
    }

    /// False when the one-pass counts already rule the candidate out.
    fn worth_joining(&mut self, pre: &Option<Vec<(u64, u64)>>, label: Label, rdepth: usize) -> bool {
        let Some(pre) = pre else { return true };
        let slot = self.labels.binary_search(&label).expect("known label");
        if self.passes(pre[rdepth * self.labels.len() + slot]) {
            return true;
        }
        self.counter.note_candidate(false);
        false
    }

    fn visit(
        &mut self,
        p: &Pattern,
        state: &C::State,
        class: Option<&[(Label, usize)]>,
    ) -> Result<(), OracleError> {
        if !self.cfg.may_extend(p.len()) {
            return Ok(());
        }
        let class = if self.cfg.class_merge { class } else { None };
        let candidates = enumerate_extensions(p, &self.labels, class);
        let pre = self.counter.precount(p, state, &self.labels);
        if !self.cfg.class_merge {
            for (label, rdepth) in candidates {
                if !self.worth_joining(&pre, label, rdepth) {
                    continue;
                }
                let cand = p.rextend(label, rdepth).expect("valid rdepth");
                let st = self.counter.extend(p, state, &cand, rdepth)?;
                let keep = self.frequent(&st);
                self.counter.note_candidate(keep);
                if keep {
                    self.record(&cand, &st);
                    self.visit(&cand, &st, None)?;
                }
                self.counter.release(&st);
            }
            return Ok(());
        }
        let mut children = Vec::new();
        for (label, rdepth) in candidates {
            if !self.worth_joining(&pre, label, rdepth) {
                continue;
            }
            let cand = p.rextend(label, rdepth).expect("valid rdepth");
            let st = self.counter.extend(p, state, &cand, rdepth)?;
            let keep = self.frequent(&st);
            self.counter.note_candidate(keep);
            if keep {
                children.push((label, rdepth, cand, st));
            } else {
                self.counter.release(&st);
            }
        }
        let members: Vec<(Label, usize)> = children.iter().map(|c| (c.0, c.1)).collect();
        for (_, _, cand, st) in children {
            self.record(&cand, &st);
            self.visit(&cand, &st, Some(&members))?;
            self.counter.release(&st);
        }
        Ok(())
    }
}

/// Runs the shared depth-first growth over a counting back end.
pub(crate) fn grow<C: Counter>(
    counter: C,
    cfg: &MinerConfig,
) -> Result<(Vec<MinedPattern>, C), OracleError> {
    cfg.validate()?;
    let mut g = Growth {
        counter,
        cfg,
        labels: Vec::new(),
        out: Vec::new(),
    };
    let mut roots = Vec::new();
    for (label, st) in g.counter.roots()? {
        let keep = g.frequent(&st);
        g.counter.note_candidate(keep);
        if keep {
            g.counter.retain_root(&st);
            roots.push((label, st));
        }
    }
    g.labels = roots.iter().map(|r| r.0).collect();
    for (label, st) in &roots {
        g.record(&Pattern::single(*label), st);
    }
    for (label, st) in &roots {
        g.visit(&Pattern::single(*label), st, None)?;
    }
    Ok((g.out, g.counter))
}

/// Per-candidate state of the embedding oracle: which trees still hold
/// occurrences, and the counts.
struct OracleState {
    trees: Vec<usize>,
    occurrences: u64,
}

struct EmbeddingCounter<'a> {
    d: &'a Dataset,
    cap: u64,
}

impl Counter for EmbeddingCounter<'_> {
    type State = OracleState;

    fn roots(&mut self) -> Result<Vec<(Label, OracleState)>, OracleError> {
        let mut by_label: BTreeMap<Label, OracleState> = BTreeMap::new();
        for (i, t) in self.d.trees().iter().enumerate() {
            for &l in t.labels() {
                let st = by_label.entry(l).or_insert(OracleState {
                    trees: Vec::new(),
                    occurrences: 0,
                });
                st.occurrences += 1;
                if st.trees.last() != Some(&i) {
                    st.trees.push(i);
                }
            }
        }
        Ok(by_label.into_iter().collect())
    }

    fn extend(
        &mut self,
        _parent: &Pattern,
        state: &OracleState,
        candidate: &Pattern,
        _rdepth: usize,
    ) -> Result<OracleState, OracleError> {
        let mut trees = Vec::new();
        let mut occurrences = 0u64;
        for &i in &state.trees {
            let n = count_embeddings(candidate, &self.d.trees()[i], self.cap)?;
            if n > 0 {
                trees.push(i);
                occurrences += n;
                if occurrences > self.cap {
                    return Err(OracleError::ExplosionGuard { cap: self.cap });
                }
            }
        }
        Ok(OracleState { trees, occurrences })
    }

    fn supports(&self, state: &OracleState) -> (u64, u64) {
        (state.occurrences, state.trees.len() as u64)
    }

    fn entries(&self, state: &OracleState) -> usize {
        state.occurrences as usize
    }
}

/// Ground-truth frequent set: candidates grown by rightmost-path extension,
/// each counted by explicit embedding enumeration.
pub fn oracle_mine(d: &Dataset, cfg: &MinerConfig) -> Result<PatternSet, OracleError> {
    oracle_mine_capped(d, cfg, DEFAULT_GUARD)
}

pub fn oracle_mine_capped(
    d: &Dataset,
    cfg: &MinerConfig,
    cap: u64,
) -> Result<PatternSet, OracleError> {
    let (found, _) = grow(EmbeddingCounter { d, cap }, cfg)?;
    Ok(pattern_set(&found, cfg.count_mode))
}

/// Number of embeddings of `p` summed over the dataset.
pub fn dataset_support(d: &Dataset, p: &Pattern, cap: u64) -> Result<(u64, u64), OracleError> {
    let mut occ = 0;
    let mut trees = 0;
    for t in d.trees() {
        let n = count_embeddings(p, t, cap)?;
        occ += n;
        trees += u64::from(n > 0);
    }
    Ok((occ, trees))
}

/// Convenience for diffs: renders a set as `pattern\tsupport` lines.
pub fn render_set(set: &PatternSet) -> String {
    set.iter().map(|(k, v)| format!("{k}\t{v}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::parse_dataset_str;

    #[test]
    fn oracle_on_three_vertex_tree() {
        let d = parse_dataset_str("0 0 5 0 1 -1 2 -1").unwrap();
        let set = oracle_mine(&d, &MinerConfig::new(1)).unwrap();
        assert_eq!(
            render_set(&set),
            "0\t1\n0 1\t1\n0 1 -1 2\t1\n0 2\t1\n1\t1\n2\t1\n"
        );
    }

    #[test]
    fn oracle_on_empty_dataset() {
        let set = oracle_mine(&Dataset::default(), &MinerConfig::new(1)).unwrap();
        assert!(set.is_empty());
    }

    #[test]
    fn oracle_guard() {
        let d = parse_dataset_str("0 0 9 0 0 -1 0 -1 0 -1 0 -1").unwrap();
        assert_eq!(
            oracle_mine_capped(&d, &MinerConfig::new(1), 3),
            Err(OracleError::ExplosionGuard { cap: 3 })
        );
    }
}
