#![allow(dead_code)]

use embedmine::encoding::Dataset;
use embedmine::tree::{DatabaseTree, Label, Pattern, VertexId};
use proptest::prelude::*;

pub fn random_dataset(seed: u64, n_trees: usize, max_vertices: usize, n_labels: u32) -> Dataset {
    embedmine::synth::random_forest(seed, n_trees, max_vertices, n_labels)
}

/// Proptest strategy over parent vectors in preorder form.
pub fn tree_strategy(max_vertices: usize, n_labels: u32) -> impl Strategy<Value = DatabaseTree> {
    (1..=max_vertices)
        .prop_flat_map(move |n| {
            (
                proptest::collection::vec(0..n_labels, n),
                proptest::collection::vec(any::<prop::sample::Index>(), n),
            )
        })
        .prop_map(|(labels, picks)| {
            let mut parents: Vec<Option<VertexId>> = vec![None];
            let mut spine: Vec<VertexId> = vec![0];
            for v in 1..labels.len() as VertexId {
                let keep = 1 + picks[v as usize].index(spine.len());
                spine.truncate(keep);
                parents.push(Some(*spine.last().unwrap()));
                spine.push(v);
            }
            DatabaseTree::build(0, labels, parents).unwrap()
        })
}

pub fn dataset_strategy(
    max_trees: usize,
    max_vertices: usize,
    n_labels: u32,
) -> impl Strategy<Value = Dataset> {
    proptest::collection::vec(tree_strategy(max_vertices, n_labels), 0..=max_trees).prop_map(|ts| {
        let trees = ts
            .into_iter()
            .enumerate()
            .map(|(i, t)| {
                DatabaseTree::build(i as u32, t.labels().to_vec(), t.parents().to_vec()).unwrap()
            })
            .collect();
        Dataset::new(trees).unwrap()
    })
}

pub fn as_pattern(t: &DatabaseTree) -> Pattern {
    Pattern::from_parents(t.labels().to_vec(), t.parents().to_vec()).unwrap()
}

/// Root with `n - 1` leaf children, all labelled `label`.
pub fn star(n: usize, label: Label) -> DatabaseTree {
    let parents = std::iter::once(None)
        .chain(std::iter::repeat_n(Some(0), n - 1))
        .collect();
    DatabaseTree::build(0, vec![label; n], parents).unwrap()
}

/// Chain of `n` vertices, all labelled `label`.
pub fn path(n: usize, label: Label) -> DatabaseTree {
    let parents = (0..n as VertexId).map(|v| v.checked_sub(1)).collect();
    DatabaseTree::build(0, vec![label; n], parents).unwrap()
}

pub fn single(t: DatabaseTree) -> Dataset {
    Dataset::new(vec![t]).unwrap()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).unwrap()
}
