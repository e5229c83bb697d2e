//! Baseline vertical miner that stores one list element per embedding.
//!
//! An element records the tree and the images of all pattern vertices; the
//! scope of any image is read back from the tree. Extending a pattern pairs
//! every element with every matching vertex in the admissible preorder window,
//! so list sizes equal embedding counts.

use std::collections::BTreeMap;
use std::ops::Range;

use crate::encoding::Dataset;
use crate::miner::{MinedPattern, MinerConfig};
use crate::tree::{Label, Pattern, VertexId};

use super::{grow, Counter, OracleError};

/// Storage counters of a baseline run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScopeListStats {
    pub candidates_generated: u64,
    pub candidates_frequent: u64,
    /// Elements allocated over the whole run.
    pub total_elements: u64,
    /// Largest number of elements alive at once.
    pub peak_live_elements: u64,
}

#[derive(Debug, Clone, Default)]
pub struct ScopeListOutcome {
    pub patterns: Vec<MinedPattern>,
    pub stats: ScopeListStats,
}

/// Elements sorted by tree index; `maps` is flat with `width` images each.
pub(crate) struct ScopeList {
    width: usize,
    trees: Vec<u32>,
    maps: Vec<VertexId>,
}

impl ScopeList {
    fn len(&self) -> usize {
        self.trees.len()
    }

    fn tree_range(&self, tree: u32, from: usize) -> Range<usize> {
        let start = from + self.trees[from..].partition_point(|&t| t < tree);
        let end = start + self.trees[start..].partition_point(|&t| t == tree);
        start..end
    }

    fn distinct_trees(&self) -> u64 {
        let mut n = 0;
        let mut last = None;
        for &t in &self.trees {
            if last != Some(t) {
                n += 1;
                last = Some(t);
            }
        }
        n
    }
}

struct ScopeListCounter<'a> {
    d: &'a Dataset,
    cap: u64,
    vertex_lists: BTreeMap<Label, ScopeList>,
    /// Index of each vertex's label among the extension labels.
    label_index: Option<Vec<Vec<u32>>>,
    live: u64,
    stats: ScopeListStats,
}

impl ScopeListCounter<'_> {
    fn join(&mut self, parent: &Pattern, list: &ScopeList, label: Label, rdepth: usize) -> Result<ScopeList, OracleError> {
        let k = list.width;
        let path = parent.rightmost_path();
        let y = path[rdepth] as usize;
        let z = path.get(rdepth + 1).map(|&z| z as usize);
        let vertices = &self.vertex_lists[&label];
        let mut out = ScopeList {
            width: k + 1,
            trees: Vec::new(),
            maps: Vec::new(),
        };
        let mut cursor = 0;
        for e in 0..list.len() {
            let tree_idx = list.trees[e];
            let scopes = self.d.trees()[tree_idx as usize].scopes();
            let map = &list.maps[e * k..(e + 1) * k];
            let ys = scopes[map[y] as usize];
            let lo = match z {
                Some(z) => scopes[map[z] as usize].u + 1,
                None => ys.l + 1,
            };
            let r = vertices.tree_range(tree_idx, cursor);
            cursor = r.start;
            let vs = &vertices.maps[r];
            let first = vs.partition_point(|&v| v < lo);
            for &x in vs[first..].iter().take_while(|&&x| x <= ys.u) {
                if self.live + out.len() as u64 >= self.cap {
                    return Err(OracleError::ExplosionGuard { cap: self.cap });
                }
                out.trees.push(tree_idx);
                out.maps.extend_from_slice(map);
                out.maps.push(x);
            }
        }
        Ok(out)
    }
}

impl Counter for ScopeListCounter<'_> {
    type State = ScopeList;

    fn roots(&mut self) -> Result<Vec<(Label, ScopeList)>, OracleError> {
        let mut lists: BTreeMap<Label, ScopeList> = BTreeMap::new();
        for (i, t) in self.d.trees().iter().enumerate() {
            for (v, &l) in t.labels().iter().enumerate() {
                let list = lists.entry(l).or_insert(ScopeList {
                    width: 1,
                    trees: Vec::new(),
                    maps: Vec::new(),
                });
                list.trees.push(i as u32);
                list.maps.push(v as VertexId);
            }
        }
        let mut roots = Vec::with_capacity(lists.len());
        for (&l, list) in &lists {
            self.stats.total_elements += list.len() as u64;
            roots.push((
                l,
                ScopeList {
                    width: 1,
                    trees: list.trees.clone(),
                    maps: list.maps.clone(),
                },
            ));
        }
        self.vertex_lists = lists;
        Ok(roots)
    }

    fn extend(
        &mut self,
        parent: &Pattern,
        state: &ScopeList,
        candidate: &Pattern,
        rdepth: usize,
    ) -> Result<ScopeList, OracleError> {
        let label = candidate.label(candidate.rightmost_vertex());
        let out = self.join(parent, state, label, rdepth)?;
        self.stats.total_elements += out.len() as u64;
        self.live += out.len() as u64;
        self.stats.peak_live_elements = self.stats.peak_live_elements.max(self.live);
        Ok(out)
    }

    fn precount(
        &mut self,
        parent: &Pattern,
        state: &ScopeList,
        labels: &[Label],
    ) -> Option<Vec<(u64, u64)>> {
        let d = self.d;
        let index = self.label_index.get_or_insert_with(|| {
            d.trees()
                .iter()
                .map(|t| {
                    t.labels()
                        .iter()
                        .map(|l| labels.binary_search(l).map_or(u32::MAX, |i| i as u32))
                        .collect()
                })
                .collect()
        });
        let n = labels.len();
        let path = parent.rightmost_path();
        let depth = path.len() - 1;
        // (occurrences, trees, last tree seen) per rdepth and label
        let mut cells = vec![(0u64, 0u64, u32::MAX); path.len() * n];
        let k = state.width;
        for e in 0..state.len() {
            let tree_idx = state.trees[e];
            let scopes = d.trees()[tree_idx as usize].scopes();
            let idx = &index[tree_idx as usize];
            let map = &state.maps[e * k..(e + 1) * k];
            for c in 0..=depth {
                let ys = scopes[map[path[c] as usize] as usize];
                let lo = if c == depth {
                    ys.l + 1
                } else {
                    scopes[map[path[c + 1] as usize] as usize].u + 1
                };
                for x in lo..=ys.u {
                    let s = idx[x as usize];
                    if s == u32::MAX {
                        continue;
                    }
                    let cell = &mut cells[c * n + s as usize];
                    cell.0 += 1;
                    if cell.2 != tree_idx {
                        cell.2 = tree_idx;
                        cell.1 += 1;
                    }
                }
            }
        }
        Some(cells.into_iter().map(|(o, t, _)| (o, t)).collect())
    }

    fn supports(&self, state: &ScopeList) -> (u64, u64) {
        (state.len() as u64, state.distinct_trees())
    }

    fn entries(&self, state: &ScopeList) -> usize {
        state.len()
    }

    fn retain_root(&mut self, state: &ScopeList) {
        self.live += state.len() as u64;
        self.stats.peak_live_elements = self.stats.peak_live_elements.max(self.live);
    }

    fn release(&mut self, state: &ScopeList) {
        self.live -= state.len() as u64;
    }

    fn note_candidate(&mut self, frequent: bool) {
        self.stats.candidates_generated += 1;
        self.stats.candidates_frequent += u64::from(frequent);
    }
}

/// Mines `d` with per-embedding scope-lists. Fails with `ExplosionGuard` once
/// more than `cap` elements would be alive at the same time.
pub fn scopelist_mine(d: &Dataset, cfg: &MinerConfig, cap: u64) -> Result<ScopeListOutcome, OracleError> {
    let counter = ScopeListCounter {
        d,
        cap,
        vertex_lists: BTreeMap::new(),
        label_index: None,
        live: 0,
        stats: ScopeListStats::default(),
    };
    let (patterns, counter) = grow(counter, cfg)?;
    Ok(ScopeListOutcome {
        patterns,
        stats: counter.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::parse_dataset_str;
    use crate::oracle::{pattern_set, render_set, DEFAULT_GUARD};

    #[test]
    fn matches_hand_count() {
        // a(b, b, c), a, c: a(b, c) has two embeddings
        let d = parse_dataset_str("0 0 7 0 1 -1 1 -1 2 -1\n1 1 1 0\n2 2 1 2").unwrap();
        let out = scopelist_mine(&d, &MinerConfig::new(2), DEFAULT_GUARD).unwrap();
        let set = pattern_set(&out.patterns, Default::default());
        assert_eq!(render_set(&set), "0\t2\n0 1\t2\n0 1 -1 2\t2\n1\t2\n2\t2\n");
    }

    #[test]
    fn single_vertex_lists_match_vertex_counts() {
        let d = parse_dataset_str("0 0 5 0 0 -1 1 -1\n1 1 1 0").unwrap();
        let mut cfg = MinerConfig::new(1);
        cfg.max_pattern_size = Some(1);
        let out = scopelist_mine(&d, &cfg, DEFAULT_GUARD).unwrap();
        let entries: Vec<_> = out.patterns.iter().map(|m| m.occ_entries).collect();
        assert_eq!(entries, vec![3, 1]);
        assert_eq!(out.stats.peak_live_elements, 4);
    }

    #[test]
    fn guard_trips_on_live_elements() {
        let d = parse_dataset_str("0 0 9 0 0 -1 0 -1 0 -1 0 -1").unwrap();
        let err = scopelist_mine(&d, &MinerConfig::new(1), 8).unwrap_err();
        assert_eq!(err, OracleError::ExplosionGuard { cap: 8 });
    }
}
