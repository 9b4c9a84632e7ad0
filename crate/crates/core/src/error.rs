use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid terminal count {0}: at least 2 terminals are required")]
    InvalidTerminalCount(usize),

    #[error("invalid edge id {0}")]
    InvalidEdge(usize),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid bipartition mask {mask:#b} for k = {k}")]
    InvalidBipartition { k: usize, mask: u64 },

    #[error("class {class} contains terminals q{} and q{}", first + 1, second + 1)]
    TerminalCollision {
        class: usize,
        first: usize,
        second: usize,
    },

    #[error("exhaustive oracle needs {free} free vertices, capacity is {limit}")]
    OracleCapacityExceeded { free: usize, limit: usize },

    #[error("minimum terminal cuts are not unique (gap is zero)")]
    NonUniqueCuts,

    #[error("perturbation failed validation after {attempts} attempts")]
    PerturbationFailed { attempts: u32 },

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("edge set is not a circuit: dual vertex {vertex} has degree {degree}")]
    NotACircuit { vertex: usize, degree: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid network pair: {0}")]
    InvalidPair(String),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed store: {0}")]
    MalformedStore(String),

    #[error("internal error: {0}")]
    Internal(String),
}
