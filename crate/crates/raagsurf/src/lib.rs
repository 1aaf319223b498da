//! Decision procedures for surface subgroups of right-angled Artin groups on
//! small defining graphs.

pub mod certcheck;
pub mod graph;
pub mod ops;
pub mod patterns;
pub mod pipeline;
pub mod reduction;

pub use graph::{
    canonical_code, canonical_form, enumerate_all, enumerate_codes, is_isomorphic, CanonicalCode,
    GraphError, SmallGraph, VertexId, VertexSet,
};
