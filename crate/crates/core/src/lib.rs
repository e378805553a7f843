//! Randomized greedy maximal independent set: the sequential greedy, the
//! recursive membership oracle with early break, and the bottom-up run that
//! marks query edges, together with exact tools for checking the
//! query-path potential argument on small graphs.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, reports,
//! parallel execution and the command line live in the `rgmis` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod consistency;
pub mod engines;
pub mod error;
pub mod expectation;
pub mod graph;
pub mod paths;
pub mod ranks;

pub use error::{Error, Result};
pub use graph::{build_graph, generate_er, generate_named, Family, Graph, GraphBuild, OrderedEdge, Vertex};
pub use ranks::{random_rank_assignment, RankAssignment};

/// Exact rational used for every probability and potential. Denominators
/// divide `n!` times small factors, far inside `i128`.
pub type Rational = num_rational::Ratio<i128>;
