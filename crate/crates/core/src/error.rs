use thiserror::Error;

/// Errors raised by the analysis, synthesis and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("invalid network: {0}")]
    Invalid(String),

    #[error("self-loop on state node {node}")]
    SelfLoop { node: usize },

    #[error("{what} index {index} out of range (limit {limit})")]
    OutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("duplicate {what} edge [{from}, {to}]")]
    DuplicateEdge {
        what: &'static str,
        from: usize,
        to: usize,
    },

    #[error("graph is not input-accessible; unreachable state nodes: {nodes:?}")]
    NotInputAccessible { nodes: Vec<usize> },

    #[error("graph contains a cycle")]
    NotAcyclic,

    #[error("size limit exceeded: {size} state nodes, limit {limit}")]
    SizeLimit { size: usize, limit: usize },

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degenerate output matrix: {0}")]
    DegenerateOutput(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
