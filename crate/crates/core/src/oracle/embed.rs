//! Explicit embedding enumeration.
//!
//! An embedding maps pattern vertices to tree vertices so that labels match,
//! preorder is preserved, and ancestry holds in the tree exactly when it holds
//! in the pattern.

use crate::tree::{DatabaseTree, Pattern, VertexId};

use super::OracleError;

/// One occurrence of a pattern: `map[j]` is the image of pattern vertex `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Embedding {
    pub tid: u32,
    pub map: Vec<VertexId>,
}

impl Embedding {
    /// Images of the pattern's rightmost-path vertices, root first.
    pub fn rightmost_path_image(&self, p: &Pattern) -> Vec<VertexId> {
        p.rightmost_path().iter().map(|&v| self.map[v as usize]).collect()
    }
}

/// Per pattern vertex: its parent and the earlier vertices it must lie to
/// the right of (everything earlier that is not one of its ancestors).
struct Plan {
    parent: Vec<Option<usize>>,
    left_of: Vec<Vec<usize>>,
}

impl Plan {
    fn new(p: &Pattern) -> Self {
        let k = p.len();
        let parent = (0..k).map(|j| p.parent(j as VertexId).map(|x| x as usize)).collect();
        let left_of = (0..k)
            .map(|j| {
                (0..j)
                    .filter(|&w| !p.is_ancestor(w as VertexId, j as VertexId))
                    .collect()
            })
            .collect();
        Plan { parent, left_of }
    }
}

/// Calls `f` with every embedding of `p` in `t`, in lexicographic order of
/// the image vector. Returns the number found, or `ExplosionGuard` as soon
/// as the count would exceed `cap`.
pub fn for_each_embedding<F: FnMut(&[VertexId])>(
    p: &Pattern,
    t: &DatabaseTree,
    cap: u64,
    mut f: F,
) -> Result<u64, OracleError> {
    let plan = Plan::new(p);
    let mut map = vec![0 as VertexId; p.len()];
    let mut count = 0u64;
    search(p, t, &plan, 0, &mut map, &mut count, cap, &mut f)?;
    Ok(count)
}

#[allow(clippy::too_many_arguments)]
fn search<F: FnMut(&[VertexId])>(
    p: &Pattern,
    t: &DatabaseTree,
    plan: &Plan,
    j: usize,
    map: &mut [VertexId],
    count: &mut u64,
    cap: u64,
    f: &mut F,
) -> Result<(), OracleError> {
    if j == map.len() {
        *count += 1;
        if *count > cap {
            return Err(OracleError::ExplosionGuard { cap });
        }
        f(map);
        return Ok(());
    }
    let scopes = t.scopes();
    let (lo, hi) = match plan.parent[j] {
        None => (0, t.len() as VertexId - 1),
        Some(par) => {
            let s = scopes[map[par] as usize];
            (s.l + 1, s.u)
        }
    };
    // strictly after the previous image, and after the subtrees of
    // earlier non-ancestors
    let mut lo = if j > 0 { lo.max(map[j - 1] + 1) } else { lo };
    for &w in &plan.left_of[j] {
        lo = lo.max(scopes[map[w] as usize].u + 1);
    }
    let want = p.label(j as VertexId);
    let mut v = lo;
    while v <= hi {
        if t.labels()[v as usize] == want {
            map[j] = v;
            search(p, t, plan, j + 1, map, count, cap, f)?;
        }
        v += 1;
    }
    Ok(())
}

pub fn count_embeddings(p: &Pattern, t: &DatabaseTree, cap: u64) -> Result<u64, OracleError> {
    for_each_embedding(p, t, cap, |_| {})
}

pub fn enumerate_embeddings_capped(
    p: &Pattern,
    t: &DatabaseTree,
    cap: u64,
) -> Result<Vec<Embedding>, OracleError> {
    let mut out = Vec::new();
    for_each_embedding(p, t, cap, |m| {
        out.push(Embedding {
            tid: t.tid(),
            map: m.to_vec(),
        })
    })?;
    Ok(out)
}

/// All embeddings of `p` in `t`, guarded by [`super::DEFAULT_GUARD`].
pub fn enumerate_embeddings(p: &Pattern, t: &DatabaseTree) -> Result<Vec<Embedding>, OracleError> {
    enumerate_embeddings_capped(p, t, super::DEFAULT_GUARD)
}

fn tree_ancestor(t: &DatabaseTree, u: VertexId, v: VertexId) -> bool {
    let mut cur = t.parents()[v as usize];
    while let Some(x) = cur {
        if x == u {
            return true;
        }
        cur = t.parents()[x as usize];
    }
    false
}

/// Checks the embedding conditions directly, using parent links only.
pub fn is_embedding(p: &Pattern, t: &DatabaseTree, map: &[VertexId]) -> bool {
    if map.len() != p.len() || map.iter().any(|&v| v as usize >= t.len()) {
        return false;
    }
    for a in 0..p.len() {
        if p.label(a as VertexId) != t.labels()[map[a] as usize] {
            return false;
        }
        for b in 0..p.len() {
            if a == b {
                continue;
            }
            let (pa, pb) = (a as VertexId, b as VertexId);
            if (a < b) != (map[a] < map[b]) {
                return false;
            }
            if p.is_ancestor(pa, pb) != tree_ancestor(t, map[a], map[b]) {
                return false;
            }
        }
    }
    true
}

/// Filters all `|V(t)|^|V(p)|` mappings. Only usable on tiny inputs.
pub fn brute_force_embeddings(p: &Pattern, t: &DatabaseTree) -> Vec<Vec<VertexId>> {
    let n = t.len() as VertexId;
    let k = p.len();
    let mut out = Vec::new();
    let mut map = vec![0 as VertexId; k];
    loop {
        if is_embedding(p, t, &map) {
            out.push(map.clone());
        }
        let mut j = k;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            map[j] += 1;
            if map[j] < n {
                break;
            }
            map[j] = 0;
        }
    }
}
