use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability {0} is outside the allowed range")]
    InvalidProbability(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("vertex {0} is out of range for a graph on {1} vertices")]
    VertexOutOfRange(VertexId, usize),
    #[error("({0}, {1}) is not an edge of the input graph")]
    NotAnEdge(VertexId, VertexId),
    #[error("({0}, {1}, {2}) does not name an edge of the input graph")]
    InvalidEdgeRef(VertexId, VertexId, u32),
    #[error("vertex {0} has no neighbor other than itself")]
    IsolatedVertex(VertexId),
    #[error("sorted probing requested on an oracle with unsorted adjacency lists")]
    UnsortedOracle,
    #[error("input graph must be simple: {0}")]
    NotSimple(String),
    #[error("arrival metadata or edge labels are missing")]
    MissingMetadata,
    #[error("conditioned row for vertex {vertex} found no edge within {rounds} rounds")]
    RetryExhausted { vertex: VertexId, rounds: u64 },
    #[error("highest-degree walk from {start} revisited {at} before reaching the degree threshold")]
    RegimeViolation { start: VertexId, at: VertexId },
    #[error("subgraph contains edge ({0}, {1}) that is absent from the host graph")]
    NotASubgraph(VertexId, VertexId),
    #[error("edge list parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
