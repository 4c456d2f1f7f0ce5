//! Average-case local computation algorithms on random graphs.
//!
//! The crate provides:
//!
//! * generators for Erdős–Rényi, preferential-attachment and
//!   uniform-attachment (multi)graphs, and a probe oracle that answers
//!   `Exists`/`Deg`/`Nbr` probes while counting them;
//! * a keyed, stateless random tape that every algorithm draws its coins from;
//! * spanner and sparse-connected-subgraph LCAs for those graph families;
//! * a memoryless local access generator for an Erdős–Rényi graph together
//!   with a maximal independent set;
//! * independent verification oracles and seeded experiment drivers.
//!
//! Vertex ids are 1-based throughout.

pub mod attach;
pub mod edgelist;
pub mod er_spanner;
pub mod er_sss;
pub mod error;
pub mod experiment;
pub mod generate;
pub mod graph;
pub mod lag;
pub mod probe;
pub mod record;
pub mod tape;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{EdgeLabel, EdgeRef, GraphModel, MultiGraph, VertexId};
pub use probe::{AdjacencyOrder, ProbeCounts, ProbeOracle};
pub use record::RunRecord;
pub use tape::{CountingTape, Domain, RandomTape, Tape, TapeKey};
