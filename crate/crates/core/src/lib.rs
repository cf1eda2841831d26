//! Gadget graphs for clique detection under communication limits.
//!
//! The crate builds and verifies bipartite graphs whose edges decompose into
//! a designated family of `K_{2,2}` copies with a non-mixing property
//! ([`lbgraph`]), compiles set-disjointness instances into clique-detection
//! networks and checks the compilation by brute force ([`reduction`]), runs
//! a two-party protocol that lists every clique of a vertex-partitioned
//! graph under an exact bit budget ([`twoparty`]), and simulates
//! neighborhood-broadcast clique detection in a round-synchronous,
//! bandwidth-limited network ([`congest`]).
//!
//! All randomness flows through ChaCha8 streams keyed by explicit seeds, so
//! every pipeline is a pure function of its parameters and reproduces
//! bit-identically across platforms. [`graph`] holds the exhaustive
//! enumeration oracles everything else is checked against.

mod bits;

pub mod congest;
pub mod error;
pub mod fileio;
pub mod graph;
pub mod lbgraph;
pub mod reduction;
pub mod twoparty;

pub use error::{Error, Result};
pub use graph::{
    contains_clique, enumerate_cliques, enumerate_k22, is_bipartite, BipartiteGraph, Graph,
    VertexSet, K22,
};
pub use lbgraph::{
    construct_lower_bound_graph, cyclic_4_12, generate_random_bipartite, lemma_statistics, peel,
    verify_lower_bound_graph, ConstructionStats, LemmaStatistics, LowerBoundGraph,
    VerificationReport,
};
pub use reduction::{
    build_instance, check_reduction, cut_traffic_bound, disj, CheckMode, DisjInstance,
    PartitionedGraph, ReductionReport,
};
pub use twoparty::{
    classify_vertices, encode_adjacency, run_protocol, verify_protocol, BitLedger, ProtocolCase,
    ProtocolResult,
};
pub use congest::{measure_cut_traffic, run_folklore_detection, CongestNetwork, SimulationTrace};
