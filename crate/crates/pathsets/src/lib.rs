//! # pathsets
//!
//! An algebra of *path sets*: the spaces of one-sided infinite label
//! sequences read off all walks leaving a marked vertex of a finite
//! edge-labeled directed graph. Path sets are closed subsets of the full
//! shift that need not be shift-invariant; the shift-invariant ones are
//! exactly the one-sided sofic shifts.
//!
//! The crate provides:
//!
//! * the graph data model with pruning and validation ([`graph`]),
//! * closure constructions — intersection via the label product, union,
//!   shift, shift closure, decimation, prefix sets, and the
//!   enlarged-alphabet follower embedding ([`construct`]),
//! * canonical minimal right-resolving presentations with decision
//!   procedures for equality, containment, membership of eventually
//!   periodic words, shift-invariance, follower sets, the closure-family
//!   structure computation, and bounded kernel search ([`canonical`]),
//! * exact block counting and topological entropy via the spectral radius
//!   of the canonical adjacency matrix ([`entropy`]),
//! * reference graphs, seeded random instances, and the brute-force
//!   prefix-language oracle used by the test suites ([`corpus`]),
//! * the `.pg` text format and DOT export ([`format`]).
//!
//! Everything is a pure function over immutable values; concurrent use is
//! safe.

pub mod alphabet;
pub mod canonical;
pub mod construct;
pub mod corpus;
pub mod entropy;
pub mod error;
pub mod format;
pub mod graph;

pub use alphabet::Alphabet;
pub use canonical::{
    canonicalize, equals, follower_of_word, is_member, is_shift_invariant, is_subset,
    CanonicalPresentation, EventuallyPeriodicWord, Word,
};
pub use construct::{
    decimate, determinize, determinize_sofic, follower_embedding, label_product, prefix_graph,
    shift, shift_closure, union,
};
pub use entropy::{
    adjacency, anywhere_block_count, block_series, entropy_report, initial_block_count,
    spectral_radius, AdjacencyMatrix, BlockCountSeries, EntropyReport,
};
pub use error::{Error, Result};
pub use graph::{build_graph, DuplicateEdges, Edge, LabeledGraph, PointedGraph};
