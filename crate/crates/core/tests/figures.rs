//! Small worked examples: hand-built trees shaped after the classic
//! illustrations of preorder numbering, rightmost-path extension, occurrence
//! counting and the failure of anti-monotonicity.

use embedmine::encoding::{decode_pattern, encode_pattern, parse_dataset_str, Dataset};
use embedmine::miner::{mine, MinerConfig};
use embedmine::occ::pattern_occlist;
use embedmine::oracle::{
    dataset_support, enumerate_embeddings, is_embedding, oracle_mine, pattern_set, DEFAULT_GUARD,
};
use embedmine::tree::{Pattern, Scope};

fn pat(s: &str) -> Pattern {
    decode_pattern(&s.parse().unwrap()).unwrap()
}

// labels: a = 0, b = 1, c = 2, d = 3, e = 4

/// a(b(c), a(d)), preorder 0..4.
fn basic_tree() -> Dataset {
    parse_dataset_str("0 0 9 0 1 2 -1 -1 0 3 -1 -1").unwrap()
}

#[test]
fn basic_tree_relatives_and_extension() {
    let d = basic_tree();
    let t = &d.trees()[0];
    assert!(t.is_right_relative(1, 4).unwrap());
    assert!(!t.is_right_relative(4, 1).unwrap());
    assert!(!t.is_ancestor(1, 4).unwrap() && !t.is_ancestor(4, 1).unwrap());

    let p1 = pat("0 1 -1 3");
    assert_eq!(p1.rightmost_path(), [0, 2]);
    assert_eq!([p1.label(0), p1.label(2)], [0, 3]);
    let p2 = p1.rextend(0, 0).unwrap();
    assert_eq!(encode_pattern(&p2).to_string(), "0 1 -1 3 -1 0");
    assert_eq!(p2.parent(3), Some(0));

    // the mapping a -> 0, b -> 1, d -> 4 skips the intermediate a
    assert!(is_embedding(&p1, t, &[0, 1, 4]));
    let maps: Vec<_> = enumerate_embeddings(&p1, t).unwrap().into_iter().map(|e| e.map).collect();
    assert_eq!(maps, vec![vec![0, 1, 4]]);
}

/// a(b(d(e, e, e)), b, d)
fn antimonotone_tree() -> Dataset {
    parse_dataset_str("0 0 15 0 1 3 4 -1 4 -1 4 -1 -1 -1 1 -1 3 -1").unwrap()
}

#[test]
fn infrequent_prefix_blocks_frequent_supertrees() {
    let d = antimonotone_tree();
    let p1 = pat("1 3");
    let p2 = pat("1 3 4");
    let p3 = pat("1 3 4 -1 4");
    assert_eq!(dataset_support(&d, &p1, DEFAULT_GUARD).unwrap().0, 1);
    assert_eq!(dataset_support(&d, &p2, DEFAULT_GUARD).unwrap().0, 3);
    assert_eq!(dataset_support(&d, &p3, DEFAULT_GUARD).unwrap().0, 3);
    assert_eq!(p2.without_rightmost().unwrap(), p1);
    assert_eq!(p3.without_rightmost().unwrap(), p2);

    let cfg = MinerConfig::new(2);
    let out = mine(&d, &cfg).unwrap();
    let keys: Vec<String> = out.patterns.iter().map(|m| m.encoding().to_string()).collect();
    assert!(keys.iter().all(|k| k != "1 3" && !k.starts_with("1 3 ")));
    assert!(keys.iter().any(|k| k == "1 4"));
    assert_eq!(pattern_set(&out.patterns, cfg.count_mode), oracle_mine(&d, &cfg).unwrap());
}

/// 0(1, 2, 3(4, 5)) with arbitrary labels.
#[test]
fn six_vertex_scopes() {
    let d = parse_dataset_str("0 0 11 0 1 -1 2 -1 3 1 -1 2 -1 -1").unwrap();
    let t = &d.trees()[0];
    assert_eq!(t.scope(0).unwrap(), Scope::new(0, 5));
    assert_eq!(t.scope(1).unwrap(), Scope::new(1, 1));
    assert_eq!(t.scope(3).unwrap(), Scope::new(3, 5));
    assert_eq!(t.scope(5).unwrap(), Scope::new(5, 5));
    assert!(t.is_ancestor(0, 5).unwrap());
    assert!(t.is_ancestor(3, 5).unwrap());
    assert!(!t.is_ancestor(2, 5).unwrap());
}

/// a(b(c), c, b, c): a(b, c) occurs three times, the last one at 0, 4, 5.
#[test]
fn three_occurrences() {
    let d = parse_dataset_str("0 0 11 0 1 2 -1 -1 2 -1 1 -1 2 -1").unwrap();
    let p = pat("0 1 -1 2");
    let maps: Vec<_> = enumerate_embeddings(&p, &d.trees()[0])
        .unwrap()
        .into_iter()
        .map(|e| e.map)
        .collect();
    assert_eq!(maps, vec![vec![0, 1, 3], vec![0, 1, 5], vec![0, 4, 5]]);

    // two rightmost paths: (0, 3) once and (0, 5) twice
    let list = pattern_occlist(&d, &p).unwrap();
    assert_eq!(list.dump(), "0 3 3 1 5 3\n0 5 5 2 5 5\n");
    assert_eq!(list.support().unwrap(), 3);
}
