use thiserror::Error;

use crate::graph::Edge;

/// Errors produced by the library. Violations that are data (tree-decomposition
/// checks, disk degeneracies) are reported as lists instead.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex index {index} out of range for a graph on {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("edge ({}, {}) is not an edge of the host graph", .0.0, .0.1)]
    UnknownEdge(Edge),

    #[error("pattern {0} has no vertices")]
    EmptyPattern(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("vertex {vertex} has layer {layer}, outside [{lo}, {hi}]")]
    LayerOutOfRange {
        vertex: usize,
        layer: usize,
        lo: usize,
        hi: usize,
    },

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("invalid layering: {0}")]
    InvalidLayering(String),

    #[error("degenerate disk input: {0}")]
    DegenerateInput(String),

    #[error("minor model check failed: {0}")]
    ModelInvalid(String),

    #[error("local radius is unbounded (disk {0} has a disconnected interior)")]
    UnboundedRadius(usize),

    #[error("malformed formula: {0}")]
    MalformedFormula(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
