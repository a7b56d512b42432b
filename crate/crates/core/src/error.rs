use thiserror::Error;

use crate::graph::{EdgeId, VertexId};
use crate::sim::Metrics;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("edge {0} is a tree edge")]
    TreeEdge(EdgeId),

    #[error("budget violation: vertex {vertex} sent {tokens} tokens on edge {edge} in round {round} (budget {budget})")]
    BudgetViolation {
        vertex: VertexId,
        edge: EdgeId,
        round: u32,
        tokens: usize,
        budget: usize,
    },

    #[error("vertex {vertex} sent on edge {edge} which is not incident to it")]
    NotIncident { vertex: VertexId, edge: EdgeId },

    #[error("round limit {max_rounds} reached before all vertices halted")]
    Timeout { max_rounds: u32, partial: Box<Metrics> },

    #[error("tree edge {edge} (below vertex {vertex}) cannot be covered")]
    Bridge { vertex: VertexId, edge: EdgeId },

    #[error("instance too large for exact search: {0}")]
    TooLarge(String),

    #[error("no feasible augmentation exists")]
    Infeasible,

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
