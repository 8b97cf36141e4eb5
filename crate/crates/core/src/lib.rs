//! Replacement-path algorithms for undirected, unweighted graphs.
//!
//! A *replacement path* for a vertex pair `(s, t)` and an edge `e` on the
//! shortest `s`–`t` path is the shortest `s`–`t` path in the graph with `e`
//! removed. This crate computes the lengths of all replacement paths from one
//! source (`ssrp`) or from a set of sources (`msrp`) to every vertex, keyed by
//! the edges of canonical BFS-tree shortest paths.
//!
//! The multi-source pipeline samples two independent families of random
//! vertices (landmarks and prioritized centers), solves source-to-landmark
//! replacement paths through a cascade of auxiliary-graph Dijkstra runs, and
//! then answers all remaining targets with per-distance-scale landmark scans.
//! A brute-force oracle ([`oracle`]) and an executable reduction from Boolean
//! matrix multiplication ([`bmm`]) round out the toolkit.
//!
//! The crate is `no_std` (alloc required); IO, file formats and the CLI live
//! in the companion `replanepath` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod aux;
pub mod bmm;
pub mod config;
pub mod counters;
pub mod graph;
pub mod lca;
pub mod msrp;
pub mod oracle;
pub mod pair_rp;
pub mod rng;
pub mod sampling;
pub mod ssrp;
pub mod store;
pub mod table;
pub mod tree;

pub use config::{AlgoConfig, Scales};
pub use counters::Counters;
pub use graph::{dist_add, Dist, EdgeId, Graph, GraphError, Vertex, INF};
pub use lca::LcaIndex;
pub use sampling::{CenterSets, LandmarkSets};
pub use table::ReplacementTable;
pub use tree::{bfs_tree, ShortestPathTree, TreeStore};
