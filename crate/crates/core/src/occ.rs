//! Compressed occurrence lists and the two join operators.
//!
//! An [`Occ`] stands for every occurrence of a pattern in one database tree
//! that shares the same rightmost path. It records, for each rightmost-path
//! vertex from the root down, its preorder number (`path`) and the upper bound
//! of its scope (`rp`), plus how many occurrences it represents. The scope of
//! the last vertex is `(path.last, rp.last)`.
//!
//! Growing a pattern by one vertex below its rightmost vertex is a
//! [`leaf_join`]; growing it at a shallower rightmost-path vertex is an
//! [`inner_join`], which folds all entries agreeing on the kept prefix of the
//! rightmost path into one output entry and sums their multiplicities.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Range;

use thiserror::Error;

use crate::encoding::Dataset;
use crate::tree::{Label, Pattern, Scope};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OccError {
    #[error("occurrence count overflowed 64 bits")]
    CountOverflow,
    #[error("join operand is not a single-vertex occ-list (width {0})")]
    NotSingleVertex(usize),
    #[error("inner join at rdepth {rdepth} needs a rightmost path longer than {width}")]
    InvalidAttachPoint { rdepth: usize, width: usize },
}

/// Owned copy of one occ-list entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Occ {
    pub tid: u32,
    pub rp: Vec<u32>,
    pub path: Vec<u32>,
    pub multiplicity: u64,
}

impl Occ {
    pub fn scope(&self) -> Scope {
        Scope::new(*self.path.last().unwrap(), *self.rp.last().unwrap())
    }
}

/// Borrowed view of one occ-list entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OccRef<'a> {
    pub tid: u32,
    pub rp: &'a [u32],
    pub path: &'a [u32],
    pub multiplicity: u64,
}

impl OccRef<'_> {
    pub fn scope(&self) -> Scope {
        let last = self.rp.len() - 1;
        Scope::new(self.path[last], self.rp[last])
    }

    pub fn to_owned(&self) -> Occ {
        Occ {
            tid: self.tid,
            rp: self.rp.to_vec(),
            path: self.path.to_vec(),
            multiplicity: self.multiplicity,
        }
    }
}

/// All occurrences of one pattern, sorted by `(tid, path)`.
///
/// Storage is flat: entry `i` owns `rp[i*width..(i+1)*width]` and the same
/// slice of `path`, where `width` is the number of rightmost-path vertices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OccList {
    width: usize,
    tids: Vec<u32>,
    rp: Vec<u32>,
    path: Vec<u32>,
    mult: Vec<u64>,
}

impl OccList {
    pub fn new(width: usize) -> Self {
        OccList {
            width,
            ..Default::default()
        }
    }

    fn with_capacity(width: usize, entries: usize) -> Self {
        OccList {
            width,
            tids: Vec::with_capacity(entries),
            rp: Vec::with_capacity(entries * width),
            path: Vec::with_capacity(entries * width),
            mult: Vec::with_capacity(entries),
        }
    }

    /// Builds a list from owned entries, sorting them.
    ///
    /// Panics if entries disagree on width or share a `(tid, path)` key.
    pub fn from_entries(width: usize, mut entries: Vec<Occ>) -> Self {
        entries.sort_by(|a, b| (a.tid, &a.path).cmp(&(b.tid, &b.path)));
        let mut list = OccList::with_capacity(width, entries.len());
        for e in &entries {
            assert!(e.rp.len() == width && e.path.len() == width, "entry width");
            list.push_parts(e.tid, &e.rp, &[], &e.path, &[], e.multiplicity);
        }
        list.assert_sorted();
        list
    }

    #[inline]
    fn push_parts(
        &mut self,
        tid: u32,
        rp_prefix: &[u32],
        rp_tail: &[u32],
        path_prefix: &[u32],
        path_tail: &[u32],
        mult: u64,
    ) {
        debug_assert_eq!(rp_prefix.len() + rp_tail.len(), self.width);
        self.tids.push(tid);
        self.rp.extend_from_slice(rp_prefix);
        self.rp.extend_from_slice(rp_tail);
        self.path.extend_from_slice(path_prefix);
        self.path.extend_from_slice(path_tail);
        self.mult.push(mult);
    }

    /// Number of rightmost-path vertices of the pattern.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.tids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tids.is_empty()
    }

    pub fn get(&self, i: usize) -> OccRef<'_> {
        let span = i * self.width..(i + 1) * self.width;
        OccRef {
            tid: self.tids[i],
            rp: &self.rp[span.clone()],
            path: &self.path[span],
            multiplicity: self.mult[i],
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = OccRef<'_>> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub fn to_vec(&self) -> Vec<Occ> {
        self.iter().map(|o| o.to_owned()).collect()
    }

    #[inline]
    fn rp_at(&self, i: usize, j: usize) -> u32 {
        self.rp[i * self.width + j]
    }

    #[inline]
    fn path_at(&self, i: usize, j: usize) -> u32 {
        self.path[i * self.width + j]
    }

    #[inline]
    fn path_prefix(&self, i: usize, len: usize) -> &[u32] {
        &self.path[i * self.width..i * self.width + len]
    }

    /// Per-occurrence support: the sum of multiplicities.
    pub fn support(&self) -> Result<u64, OccError> {
        self.mult
            .iter()
            .try_fold(0u64, |acc, &m| acc.checked_add(m))
            .ok_or(OccError::CountOverflow)
    }

    /// Number of distinct trees holding at least one occurrence.
    pub fn per_tree_support(&self) -> u64 {
        let mut count = 0;
        let mut last = None;
        for &t in &self.tids {
            if last != Some(t) {
                count += 1;
                last = Some(t);
            }
        }
        count
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.mult.iter().copied().max().unwrap_or(0)
    }

    /// Approximate heap footprint of the entries.
    pub fn heap_bytes(&self) -> usize {
        self.len() * (4 + 8 + 8 * self.width)
    }

    /// One line per entry: `tid l u mult rp0 rp1 ...`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for o in self.iter() {
            let s = o.scope();
            let _ = write!(out, "{} {} {} {}", o.tid, s.l, s.u, o.multiplicity);
            for r in o.rp {
                let _ = write!(out, " {r}");
            }
            out.push('\n');
        }
        out
    }

    /// Index range of the entries belonging to `tid`, searching from `from`.
    fn tid_range(&self, tid: u32, from: usize) -> Range<usize> {
        let start = from + self.tids[from..].partition_point(|&t| t < tid);
        let end = start + self.tids[start..].partition_point(|&t| t == tid);
        start..end
    }

    fn assert_sorted(&self) {
        for i in 1..self.len() {
            let prev = (self.tids[i - 1], self.path_prefix(i - 1, self.width));
            let cur = (self.tids[i], self.path_prefix(i, self.width));
            assert!(prev < cur, "occ-list keys must be strictly increasing");
        }
    }

    /// Checks the structural invariants; used by tests.
    pub fn validate(&self) -> Result<(), String> {
        let w = self.width;
        if self.rp.len() != self.len() * w || self.path.len() != self.len() * w {
            return Err("flat storage length mismatch".into());
        }
        for (i, o) in self.iter().enumerate() {
            if o.multiplicity == 0 {
                return Err(format!("entry {i} has zero multiplicity"));
            }
            if o.rp.windows(2).any(|p| p[1] > p[0]) {
                return Err(format!("entry {i} rp is increasing somewhere: {:?}", o.rp));
            }
            if o.path.windows(2).any(|p| p[1] <= p[0]) {
                return Err(format!("entry {i} path not strictly descending: {:?}", o.path));
            }
            if o.path.iter().zip(o.rp).any(|(l, u)| l > u) {
                return Err(format!("entry {i} has l > u"));
            }
            if i > 0 {
                let prev = self.get(i - 1);
                if (prev.tid, prev.path) >= (o.tid, o.path) {
                    return Err(format!("entries {} and {i} out of order", i - 1));
                }
            }
        }
        Ok(())
    }
}

/// Occ-lists of every label in the dataset, one entry per vertex.
pub fn label_occlists(d: &Dataset) -> BTreeMap<Label, OccList> {
    let mut lists: BTreeMap<Label, OccList> = BTreeMap::new();
    for t in d.trees() {
        for (v, &label) in t.labels().iter().enumerate() {
            let s = t.scopes()[v];
            lists
                .entry(label)
                .or_insert_with(|| OccList::new(1))
                .push_parts(t.tid(), &[s.u], &[], &[s.l], &[], 1);
        }
    }
    lists
}

/// Occ-lists of the labels whose per-occurrence support reaches `minsup`.
pub fn initial_occlists(d: &Dataset, minsup: u64) -> BTreeMap<Label, OccList> {
    let mut lists = label_occlists(d);
    lists.retain(|_, l| l.len() as u64 >= minsup);
    lists
}

fn check_vertex_list(v: &OccList) -> Result<(), OccError> {
    if v.width != 1 {
        return Err(OccError::NotSingleVertex(v.width));
    }
    Ok(())
}

/// Extends every occurrence with a new child of its rightmost vertex.
///
/// An entry of `pattern` pairs with every vertex occurrence in the same tree
/// whose scope lies strictly inside the entry's last scope.
pub fn leaf_join(pattern: &OccList, vertex: &OccList) -> Result<OccList, OccError> {
    check_vertex_list(vertex)?;
    let w = pattern.width;
    let mut out = OccList::new(w + 1);
    let mut cursor = 0;
    let mut i = 0;
    while i < pattern.len() {
        let tid = pattern.tids[i];
        let vr = vertex.tid_range(tid, cursor);
        cursor = vr.start;
        let group_end = i + pattern.tids[i..].partition_point(|&t| t == tid);
        if vr.is_empty() {
            i = group_end;
            continue;
        }
        let vl = &vertex.path[vr.clone()];
        for e in i..group_end {
            let y = Scope::new(pattern.path_at(e, w - 1), pattern.rp_at(e, w - 1));
            let first = vl.partition_point(|&l| l <= y.l);
            for k in vr.start + first..vr.end {
                let x = Scope::new(vertex.path[k], vertex.rp[k]);
                if x.l > y.u {
                    break;
                }
                debug_assert!(y.encloses(&x));
                out.push_parts(
                    tid,
                    &pattern.rp[e * w..(e + 1) * w],
                    &[x.u],
                    &pattern.path[e * w..(e + 1) * w],
                    &[x.l],
                    pattern.mult[e],
                );
            }
        }
        i = group_end;
    }
    debug_assert!(out.validate().is_ok());
    Ok(out)
}

/// Extends every occurrence with a new rightmost child of the
/// rightmost-path vertex at `rdepth`, which must not be the rightmost vertex.
///
/// Entries agreeing on tid and on the rightmost-path vertices at rdepths
/// `0..=rdepth` form a group. A vertex occurrence `x` pairs with the members
/// whose vertex at `rdepth + 1` ends before `x` while `x` still lies inside the
/// vertex at `rdepth`; the output entry carries the sum of their multiplicities.
pub fn inner_join(pattern: &OccList, vertex: &OccList, rdepth: usize) -> Result<OccList, OccError> {
    check_vertex_list(vertex)?;
    let w = pattern.width;
    if rdepth + 1 >= w {
        return Err(OccError::InvalidAttachPoint { rdepth, width: w });
    }
    let keep = rdepth + 1;
    let mut out = OccList::new(keep + 1);
    let mut bounds: Vec<(u32, u64)> = Vec::new();
    let mut cursor = 0;
    let mut i = 0;
    while i < pattern.len() {
        let tid = pattern.tids[i];
        let prefix = pattern.path_prefix(i, keep);
        let mut end = i + 1;
        while end < pattern.len()
            && pattern.tids[end] == tid
            && pattern.path_prefix(end, keep) == prefix
        {
            end += 1;
        }
        let vr = vertex.tid_range(tid, cursor);
        cursor = vr.start;
        if vr.is_empty() {
            i = end;
            continue;
        }
        // every member shares the attach vertex, hence its upper bound
        let attach_u = pattern.rp_at(i, rdepth);
        bounds.clear();
        bounds.extend((i..end).map(|e| (pattern.rp_at(e, keep), pattern.mult[e])));
        bounds.sort_unstable_by_key(|b| b.0);

        let vl = &vertex.path[vr.clone()];
        let first = vl.partition_point(|&l| l <= bounds[0].0);
        let mut taken = 0;
        let mut acc: u64 = 0;
        for k in vr.start + first..vr.end {
            let x = Scope::new(vertex.path[k], vertex.rp[k]);
            if x.l > attach_u {
                break;
            }
            while taken < bounds.len() && bounds[taken].0 < x.l {
                acc = acc
                    .checked_add(bounds[taken].1)
                    .ok_or(OccError::CountOverflow)?;
                taken += 1;
            }
            debug_assert!(acc > 0);
            out.push_parts(
                tid,
                &pattern.rp[i * w..i * w + keep],
                &[x.u],
                prefix,
                &[x.l],
                acc,
            );
        }
        i = end;
    }
    debug_assert!(out.validate().is_ok());
    Ok(out)
}

/// Marks a vertex whose label is not among the counted labels.
pub const NO_SLOT: u32 = u32::MAX;

/// Every vertex's position in a sorted label set, so that one pass over a
/// pattern's windows can count all of its one-vertex extensions.
#[derive(Debug, Clone)]
pub struct LabelSlots {
    tids: Vec<u32>,
    slots: Vec<Vec<u32>>,
    n_slots: usize,
}

impl LabelSlots {
    /// `labels` must be sorted ascending.
    pub fn new(d: &Dataset, labels: &[Label]) -> Self {
        let slots = d
            .trees()
            .iter()
            .map(|t| {
                t.labels()
                    .iter()
                    .map(|l| labels.binary_search(l).map_or(NO_SLOT, |s| s as u32))
                    .collect()
            })
            .collect();
        LabelSlots {
            tids: d.trees().iter().map(|t| t.tid()).collect(),
            slots,
            n_slots: labels.len(),
        }
    }

    pub fn n_slots(&self) -> usize {
        self.n_slots
    }

    fn tree_from(&self, tid: u32, from: usize) -> usize {
        let i = from + self.tids[from..].partition_point(|&t| t < tid);
        debug_assert_eq!(self.tids.get(i), Some(&tid), "occ tid missing from dataset");
        i
    }
}

/// Supports of all one-vertex extensions of a pattern, indexed by attach
/// rdepth and label slot. Occurrence counts saturate at `u64::MAX`.
#[derive(Debug, Clone, Copy)]
struct SlotCount {
    occ: u64,
    trees: u64,
    last_tid: u32,
}

/// Supports of all one-vertex extensions of a pattern, indexed by attach
/// rdepth and label slot. Occurrence counts saturate at `u64::MAX`.
#[derive(Debug, Clone)]
pub struct ExtensionCounts {
    n_slots: usize,
    cells: Vec<SlotCount>,
}

impl ExtensionCounts {
    fn new(width: usize, n_slots: usize) -> Self {
        let empty = SlotCount {
            occ: 0,
            trees: 0,
            last_tid: u32::MAX,
        };
        ExtensionCounts {
            n_slots,
            cells: vec![empty; width * n_slots],
        }
    }

    #[inline]
    fn bump(&mut self, rdepth: usize, slot: u32, tid: u32, mult: u64) {
        let cell = &mut self.cells[rdepth * self.n_slots + slot as usize];
        cell.occ = cell.occ.saturating_add(mult);
        if cell.last_tid != tid {
            cell.last_tid = tid;
            cell.trees += 1;
        }
    }

    pub fn occurrences(&self, rdepth: usize, slot: usize) -> u64 {
        self.cells[rdepth * self.n_slots + slot].occ
    }

    pub fn trees(&self, rdepth: usize, slot: usize) -> u64 {
        self.cells[rdepth * self.n_slots + slot].trees
    }
}

/// Counts, without building any list, what [`leaf_join`] and [`inner_join`]
/// would yield for every label of `slots` at every rdepth of `pattern`.
pub fn count_extensions(pattern: &OccList, slots: &LabelSlots) -> ExtensionCounts {
    let w = pattern.width;
    let d = w - 1;
    let mut counts = ExtensionCounts::new(w, slots.n_slots);
    let mut ti = 0;
    for i in 0..pattern.len() {
        let tid = pattern.tids[i];
        ti = slots.tree_from(tid, ti);
        let sl = &slots.slots[ti];
        let (l, u) = (pattern.path_at(i, d), pattern.rp_at(i, d));
        for x in l + 1..=u {
            let s = sl[x as usize];
            if s != NO_SLOT {
                counts.bump(d, s, tid, pattern.mult[i]);
            }
        }
    }
    let mut bounds: Vec<(u32, u64)> = Vec::new();
    for c in 0..d {
        let keep = c + 1;
        let mut ti = 0;
        let mut i = 0;
        while i < pattern.len() {
            let tid = pattern.tids[i];
            let prefix = pattern.path_prefix(i, keep);
            let mut end = i + 1;
            while end < pattern.len()
                && pattern.tids[end] == tid
                && pattern.path_prefix(end, keep) == prefix
            {
                end += 1;
            }
            ti = slots.tree_from(tid, ti);
            let sl = &slots.slots[ti];
            let attach_u = pattern.rp_at(i, c);
            if end == i + 1 {
                let mult = pattern.mult[i];
                for x in pattern.rp_at(i, keep) + 1..=attach_u {
                    let s = sl[x as usize];
                    if s != NO_SLOT {
                        counts.bump(c, s, tid, mult);
                    }
                }
                i = end;
                continue;
            }
            bounds.clear();
            bounds.extend((i..end).map(|e| (pattern.rp_at(e, keep), pattern.mult[e])));
            bounds.sort_unstable_by_key(|b| b.0);
            let mut taken = 0;
            let mut acc: u64 = 0;
            for x in bounds[0].0 + 1..=attach_u {
                while taken < bounds.len() && bounds[taken].0 < x {
                    acc = acc.saturating_add(bounds[taken].1);
                    taken += 1;
                }
                let s = sl[x as usize];
                if s != NO_SLOT {
                    counts.bump(c, s, tid, acc);
                }
            }
            i = end;
        }
    }
    counts
}

/// Occ-list of an arbitrary pattern, built by replaying its rightmost-path
/// extensions from the root label with the joins above.
pub fn pattern_occlist(d: &Dataset, p: &Pattern) -> Result<OccList, OccError> {
    let labels = label_occlists(d);
    let empty = OccList::new(1);
    let vertex = |l: Label| labels.get(&l).unwrap_or(&empty);
    let mut cur = Pattern::single(p.label(0));
    let mut list = vertex(p.label(0)).clone();
    for j in 1..p.len() as u32 {
        let parent = p.parent(j).expect("non-root vertex");
        let rdepth = cur
            .rightmost_path()
            .iter()
            .position(|&v| v == parent)
            .expect("preorder parent lies on the rightmost path");
        let label = p.label(j);
        list = if rdepth == cur.rightmost_depth() {
            leaf_join(&list, vertex(label))?
        } else {
            inner_join(&list, vertex(label), rdepth)?
        };
        cur = cur.rextend(label, rdepth).expect("valid rdepth");
    }
    Ok(list)
}
