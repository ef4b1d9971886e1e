//! Exact computer algebra for planar regularity structures.
//!
//! Decorated planar rooted trees and ordered forests carry the free post-Lie
//! structure given by left grafting. From it come the planar Grossman–Larson
//! product, the Munthe-Kaas–Wright coproduct, the cosubstitution and
//! cotranslation coactions, the rough path model on edge-decorated trees, and
//! the deformed positive and negative Hopf algebras of regularity structures.
//!
//! All coefficients are exact rationals.

pub mod coactions;
pub mod deformed_negative;
pub mod deformed_positive;
pub mod free_postlie;
pub mod rough_model;
pub mod tree_core;

pub use tree_core::{
    pair, parse_forest, parse_lincomb, parse_tree, rat, regularity, vertex_count, EdgeDec,
    EdgeKind, Error, Forest, LinComb, Mode, MultiIndex, NonplanarForest, NonplanarTree, Rational,
    RegularityConfig, Result, Tensor3, Tensor4, TensorSum, Tree, VertexDec,
};
