use thiserror::Error;

use crate::graph::Vertex;

/// Errors raised by solvers, generators, oracles and file readers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown vertex id {vertex} (graph has {n} vertices)")]
    UnknownVertex { vertex: Vertex, n: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),

    #[error("contraction parts overlap at vertex {0}")]
    OverlappingParts(Vertex),

    #[error("graph is not connected")]
    Disconnected,

    #[error("vertex {0} has no incident edge")]
    NoIncidentEdge(Vertex),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("set cover instance is infeasible: element {0} is in no set")]
    Infeasible(usize),

    #[error("{what} is {got}, above the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
