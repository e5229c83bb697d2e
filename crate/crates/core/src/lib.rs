//! Frequent embedded subtree mining over rooted ordered labeled trees.
//!
//! Patterns are counted per occurrence: the support of a pattern is the number
//! of embeddings (label- and order-preserving maps sending pattern edges to
//! ancestor-descendant pairs) summed over the database. Occurrences that share
//! a rightmost path are stored once in an [`occ::OccList`] entry with a
//! multiplicity, so exponentially many embeddings can cost a single entry.
//!
//! ```
//! use embedmine::{encoding::parse_dataset_str, miner::{mine, MinerConfig}};
//!
//! // trees 0(1, 1, 2), 0 and 2
//! let d = parse_dataset_str("0 0 7 0 1 -1 1 -1 2 -1\n1 1 1 0\n2 2 1 2").unwrap();
//! let out = mine(&d, &MinerConfig::new(2)).unwrap();
//! let found: Vec<String> = out
//!     .patterns
//!     .iter()
//!     .map(|m| format!("{}\t{}", m.encoding(), m.support))
//!     .collect();
//! assert_eq!(found, ["0\t2", "1\t2", "2\t2", "0 1\t2", "0 1 -1 2\t2"].map(String::from));
//! ```

pub mod encoding;
pub mod miner;
pub mod occ;
pub mod oracle;
pub mod synth;
pub mod tree;

pub use encoding::{Dataset, PatternString};
pub use miner::{mine, mine_with, CountMode, MinedPattern, MinerConfig, MinerStats};
pub use occ::{inner_join, leaf_join, pattern_occlist, Occ, OccList};
pub use tree::{DatabaseTree, Label, Pattern, Scope, VertexId};
