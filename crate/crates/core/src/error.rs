use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(Vertex),
    #[error("invalid weight {weight} on pair ({u}, {v})")]
    InvalidWeight { u: Vertex, v: Vertex, weight: f64 },
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("label {0} is already used by a vertex outside the contracted set")]
    LabelInUse(Vertex),
    #[error("graphs have different vertex sets")]
    VertexSetMismatch,
    #[error("source and sink must differ (both are {0})")]
    SameEndpoints(Vertex),
    #[error("vertex sets overlap on {0}")]
    Overlapping(Vertex),
    #[error("vertex set must be nonempty")]
    EmptySet,
    #[error("need at least {needed} terminals, got {got}")]
    TooFewTerminals { needed: usize, got: usize },
    #[error("brute force refused: {n} vertices exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("recursion depth {depth} reached t_max = {t_max} (privacy budget exhausted, seed {seed})")]
    Aborted { depth: usize, t_max: usize, seed: u64 },
}
