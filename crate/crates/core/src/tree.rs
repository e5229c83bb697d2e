//! Rooted ordered labeled trees stored in preorder, with interval scopes.
//!
//! Every vertex is identified by its preorder number. A vertex's scope is the
//! pair `(l, u)` where `l` is its own preorder number and `u` is the preorder
//! number of its rightmost descendant, so ancestry reduces to interval
//! containment and "right relative" to interval precedence.

use std::fmt;

use thiserror::Error;

/// Dictionary-encoded vertex label.
pub type Label = u32;

/// Preorder number of a vertex inside one tree.
pub type VertexId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("vertex {vertex} out of range for tree of {len} vertices")]
    InvalidVertex { vertex: VertexId, len: usize },
    #[error("attach rdepth {rdepth} out of range for rightmost path of length {path_len}")]
    InvalidAttachPoint { rdepth: usize, path_len: usize },
}

/// Preorder interval of a vertex: its own number and its rightmost descendant's.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scope {
    pub l: u32,
    pub u: u32,
}

impl Scope {
    pub fn new(l: u32, u: u32) -> Self {
        debug_assert!(l <= u);
        Scope { l, u }
    }

    /// `other` lies strictly inside this scope, i.e. this vertex is a proper
    /// ancestor of `other`.
    #[inline]
    pub fn encloses(&self, other: &Scope) -> bool {
        self.l < other.l && other.u <= self.u
    }

    /// `other` starts after this whole subtree ends.
    #[inline]
    pub fn precedes(&self, other: &Scope) -> bool {
        self.u < other.l
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.l, self.u)
    }
}

/// Validates that `parents` describes a single rooted tree whose vertex order
/// is a preorder, returning the rightmost-descendant bound of every vertex.
fn preorder_bounds(parents: &[Option<VertexId>]) -> Result<Vec<u32>, TreeError> {
    let n = parents.len();
    if n == 0 {
        return Err(TreeError::MalformedTree("tree has no vertices".into()));
    }
    if parents[0].is_some() {
        return Err(TreeError::MalformedTree("vertex 0 must be the root".into()));
    }
    let mut upper: Vec<u32> = (0..n as u32).collect();
    // open path from the root to the previously visited vertex
    let mut stack: Vec<u32> = vec![0];
    for (v, parent) in parents.iter().enumerate().skip(1) {
        let p = match parent {
            None => {
                return Err(TreeError::MalformedTree(format!(
                    "vertex {v} is a second root"
                )))
            }
            Some(p) if *p as usize >= v => {
                return Err(TreeError::MalformedTree(format!(
                    "vertex {v} has parent {p} that does not precede it"
                )))
            }
            Some(p) => *p,
        };
        while let Some(&top) = stack.last() {
            if top == p {
                break;
            }
            upper[top as usize] = v as u32 - 1;
            stack.pop();
        }
        if stack.is_empty() {
            return Err(TreeError::MalformedTree(format!(
                "vertex {v} attaches to {p}, which is closed in preorder"
            )));
        }
        stack.push(v as u32);
    }
    for w in stack {
        upper[w as usize] = n as u32 - 1;
    }
    Ok(upper)
}

/// An immutable database tree in structure-of-arrays layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatabaseTree {
    tid: u32,
    labels: Vec<Label>,
    parents: Vec<Option<VertexId>>,
    scopes: Vec<Scope>,
}

impl DatabaseTree {
    /// Builds a tree from preorder labels and parent links, computing scopes
    /// in a single pass.
    pub fn build(
        tid: u32,
        labels: Vec<Label>,
        parents: Vec<Option<VertexId>>,
    ) -> Result<Self, TreeError> {
        if labels.len() != parents.len() {
            return Err(TreeError::MalformedTree(format!(
                "{} labels but {} parent links",
                labels.len(),
                parents.len()
            )));
        }
        let upper = preorder_bounds(&parents)?;
        let scopes = upper
            .into_iter()
            .enumerate()
            .map(|(l, u)| Scope::new(l as u32, u))
            .collect();
        Ok(DatabaseTree {
            tid,
            labels,
            parents,
            scopes,
        })
    }

    pub fn tid(&self) -> u32 {
        self.tid
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn parents(&self) -> &[Option<VertexId>] {
        &self.parents
    }

    pub fn scopes(&self) -> &[Scope] {
        &self.scopes
    }

    fn check(&self, v: VertexId) -> Result<usize, TreeError> {
        if (v as usize) < self.len() {
            Ok(v as usize)
        } else {
            Err(TreeError::InvalidVertex {
                vertex: v,
                len: self.len(),
            })
        }
    }

    pub fn label(&self, v: VertexId) -> Result<Label, TreeError> {
        Ok(self.labels[self.check(v)?])
    }

    pub fn parent(&self, v: VertexId) -> Result<Option<VertexId>, TreeError> {
        Ok(self.parents[self.check(v)?])
    }

    pub fn scope(&self, v: VertexId) -> Result<Scope, TreeError> {
        Ok(self.scopes[self.check(v)?])
    }

    /// Proper ancestry, decided from scopes alone.
    pub fn is_ancestor(&self, u: VertexId, v: VertexId) -> Result<bool, TreeError> {
        let (su, sv) = (self.scope(u)?, self.scope(v)?);
        Ok(su.encloses(&sv))
    }

    /// `v` is a right relative of `u`: unrelated by ancestry and later in preorder.
    pub fn is_right_relative(&self, u: VertexId, v: VertexId) -> Result<bool, TreeError> {
        let (su, sv) = (self.scope(u)?, self.scope(v)?);
        Ok(su.precedes(&sv))
    }

    pub fn subtree_size(&self, v: VertexId) -> Result<usize, TreeError> {
        let s = self.scope(v)?;
        Ok((s.u - s.l + 1) as usize)
    }

    /// Children of `v` from left to right.
    pub fn children(&self, v: VertexId) -> Result<Children<'_>, TreeError> {
        let s = self.scope(v)?;
        Ok(Children {
            scopes: &self.scopes,
            next: s.l + 1,
            end: s.u,
        })
    }

    /// Vertices in preorder.
    pub fn preorder(&self) -> impl Iterator<Item = VertexId> + '_ {
        0..self.len() as VertexId
    }

    /// Depth of `v` (root has depth 0).
    pub fn depth(&self, v: VertexId) -> Result<usize, TreeError> {
        let mut d = 0;
        let mut cur = self.parent(v)?;
        while let Some(p) = cur {
            d += 1;
            cur = self.parents[p as usize];
        }
        Ok(d)
    }
}

/// Iterator over the children of one vertex, jumping subtree by subtree.
pub struct Children<'a> {
    scopes: &'a [Scope],
    next: u32,
    end: u32,
}

impl Iterator for Children<'_> {
    type Item = VertexId;

    fn next(&mut self) -> Option<VertexId> {
        if self.next > self.end || self.next as usize >= self.scopes.len() {
            return None;
        }
        let c = self.next;
        self.next = self.scopes[c as usize].u + 1;
        Some(c)
    }
}

/// A small ordered labeled tree grown by rightmost-path extension.
///
/// Equality and hashing consider only labels and shape; the rightmost path is
/// a function of those.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    labels: Vec<Label>,
    parents: Vec<Option<VertexId>>,
    rightmost_path: Vec<VertexId>,
}

impl Pattern {
    pub fn single(label: Label) -> Self {
        Pattern {
            labels: vec![label],
            parents: vec![None],
            rightmost_path: vec![0],
        }
    }

    /// Builds a pattern from preorder labels and parent links.
    pub fn from_parents(
        labels: Vec<Label>,
        parents: Vec<Option<VertexId>>,
    ) -> Result<Self, TreeError> {
        if labels.len() != parents.len() {
            return Err(TreeError::MalformedTree(format!(
                "{} labels but {} parent links",
                labels.len(),
                parents.len()
            )));
        }
        preorder_bounds(&parents)?;
        let mut rightmost_path = Vec::new();
        let mut cur = Some(labels.len() as VertexId - 1);
        while let Some(v) = cur {
            rightmost_path.push(v);
            cur = parents[v as usize];
        }
        rightmost_path.reverse();
        Ok(Pattern {
            labels,
            parents,
            rightmost_path,
        })
    }

    /// Attaches a new vertex labeled `label` as the rightmost child of the
    /// rightmost-path vertex at `attach_rdepth`.
    pub fn rextend(&self, label: Label, attach_rdepth: usize) -> Result<Pattern, TreeError> {
        if attach_rdepth >= self.rightmost_path.len() {
            return Err(TreeError::InvalidAttachPoint {
                rdepth: attach_rdepth,
                path_len: self.rightmost_path.len(),
            });
        }
        let new_vertex = self.labels.len() as VertexId;
        let mut labels = Vec::with_capacity(self.labels.len() + 1);
        labels.extend_from_slice(&self.labels);
        labels.push(label);
        let mut parents = Vec::with_capacity(self.parents.len() + 1);
        parents.extend_from_slice(&self.parents);
        parents.push(Some(self.rightmost_path[attach_rdepth]));
        let mut rightmost_path = Vec::with_capacity(attach_rdepth + 2);
        rightmost_path.extend_from_slice(&self.rightmost_path[..=attach_rdepth]);
        rightmost_path.push(new_vertex);
        Ok(Pattern {
            labels,
            parents,
            rightmost_path,
        })
    }

    /// The pattern with its rightmost (last preorder) vertex removed.
    pub fn without_rightmost(&self) -> Option<Pattern> {
        if self.labels.len() < 2 {
            return None;
        }
        let n = self.labels.len() - 1;
        Pattern::from_parents(self.labels[..n].to_vec(), self.parents[..n].to_vec()).ok()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn parents(&self) -> &[Option<VertexId>] {
        &self.parents
    }

    pub fn label(&self, v: VertexId) -> Label {
        self.labels[v as usize]
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parents[v as usize]
    }

    pub fn rightmost_path(&self) -> &[VertexId] {
        &self.rightmost_path
    }

    /// rdepth of the rightmost vertex (length of the rightmost path in edges).
    pub fn rightmost_depth(&self) -> usize {
        self.rightmost_path.len() - 1
    }

    pub fn rightmost_vertex(&self) -> VertexId {
        *self.rightmost_path.last().expect("patterns are nonempty")
    }

    pub fn children(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.parents
            .iter()
            .enumerate()
            .filter(move |(_, p)| **p == Some(v))
            .map(|(c, _)| c as VertexId)
    }

    /// Proper ancestry inside the pattern, by walking parent links.
    pub fn is_ancestor(&self, u: VertexId, v: VertexId) -> bool {
        let mut cur = self.parents[v as usize];
        while let Some(p) = cur {
            if p == u {
                return true;
            }
            cur = self.parents[p as usize];
        }
        false
    }
}
