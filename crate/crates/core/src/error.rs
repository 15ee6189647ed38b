use std::path::PathBuf;

use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },

    #[error("neighbor index {index} out of range for vertex {vertex} of degree {degree} (indices are 1-based)")]
    NeighborIndexOutOfRange {
        vertex: Vertex,
        index: usize,
        degree: usize,
    },

    #[error("pair query on a single vertex {0}")]
    PairQuerySameVertex(Vertex),

    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("edge density m/n is undefined for a graph without edges")]
    UndefinedDensity,

    #[error("infeasible family parameters: {}", .0.join("; "))]
    Infeasible(Vec<String>),

    #[error("graph has {n} vertices; exact arboricity is limited to n <= {limit}, use degeneracy bounds instead")]
    TooLarge { n: usize, limit: usize },

    #[error("threshold graph has no edges; nothing to sample")]
    EmptySupport,

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
