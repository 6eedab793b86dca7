//! A mini-ML whose data structures are topological collections (sequences,
//! sets, bags and grids) transformed by rewriting rules, with Hindley-Milner
//! style inference polymorphic over both content types and topologies.

pub mod collections;
pub mod error;
pub mod eval;
pub mod infer;
pub mod syntax;
pub mod transform;
pub mod types;
pub mod unify;
