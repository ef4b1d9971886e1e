//! Trees, forests, exact linear combinations, parsing and grading.

mod config;
pub mod enumerate;
mod error;
mod lincomb;
mod parse;
mod rational;
mod tree;

pub use config::{pair, pair_unchecked, regularity, tree_regularity, vertex_count, RegularityConfig};
pub use error::{Error, Result};
pub use lincomb::{LinComb, Tensor3, Tensor4, TensorSum};
pub use parse::{labels_to_multi, normalize_typed, parse_forest, parse_lincomb, parse_tree, Parser};
pub use rational::{binomial, factorial, int, parse_rational, rat, to_rational, Rational};
pub use tree::{
    canonicalize, canonicalize_np, forest_mode, same_mode, tree_mode, validate_typed, EdgeDec, EdgeKind, Forest,
    Mode, MultiIndex, Multiset, NonplanarForest, NonplanarTree, Path, Tree, VertexDec,
};
