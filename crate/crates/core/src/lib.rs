//! Exhaustive enumeration of small connected graphs, exact invariants,
//! a columnar invariant store, and integer-sequence mining over it.

pub mod algebraic;
mod blocks;
pub mod canon;
pub mod enumerate;
pub mod graph;
pub mod oeis;
pub mod relations;
pub mod sequences;
pub mod store;
pub mod structural;

pub use canon::{canonical_form, CanonicalForm};
pub use graph::{
    decode_graph6, encode_graph6, Graph, GraphCode, GraphError, Multigraph, MAX_ORDER,
};
