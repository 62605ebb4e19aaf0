use thiserror::Error;

use crate::graph::EdgeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("guard exceeded: {what} (limit {limit})")]
    GuardExceeded { what: &'static str, limit: u64 },

    #[error("base checker requires simple graph; use oracle")]
    NotSimple,

    #[error("graph is not 2-connected")]
    NotTwoConnected,

    #[error("vertex set induces a disconnected subgraph")]
    DisconnectedSet,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid certificate: {0}")]
    Certificate(String),

    #[error("integer overflow in exact arithmetic ({0})")]
    Overflow(&'static str),

    /// A structural fact guaranteed by the classification failed to
    /// hold. Never swallowed: callers surface it as a hard failure.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    pub(crate) fn guard(what: &'static str, limit: u64) -> Self {
        Error::GuardExceeded { what, limit }
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
