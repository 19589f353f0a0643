//! Upward planar orders on progressive graphs.
//!
//! A progressive graph is an acyclic multigraph with a boundary of
//! degree-one leaves. An upward planar order (UPO) is a total order on its
//! edges that captures an upward planar drawing. This crate checks the
//! two axiomatic forms of a UPO, composes admissible UPO-graphs, builds the
//! UPO of a graph from a stack of elementary layers, and enumerates UPOs of
//! small graphs by brute force.

pub mod axioms;
pub mod compose;
pub mod graph;
pub mod interface;
pub mod layers;
pub mod oracle;
pub mod order;

pub use axioms::{
    check, check_admissible, check_q, check_u, is_admissible_upo, Axiom, CheckError, CheckReport, Definition,
    Diagnostic, Witness,
};
pub use compose::{compose, compose_many, ComposeError, ComposedGraph, UpoGraph};
pub use graph::{EdgeId, GraphError, ProgressiveGraph, VertexId};
pub use layers::{layer_to_upo, pipeline, Cell, LayerError, LayerSpec, LayerStack};
pub use oracle::{definitions_agree, enumerate_upos, EnumerateOptions, EnumerationResult, OracleError};
pub use order::{EdgeOrder, Interval, IntervalPartition, OrderError};
