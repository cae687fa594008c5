//! Graphs, games, strategy profiles and subsidy assignments.

mod games;
mod graph;
pub mod io;
mod mst;
mod state;
mod subsidy;
mod tree;

use thiserror::Error;

use crate::rational::ParseRationalError;

pub use games::{BroadcastGame, Game, GeneralGame};
pub use graph::{Edge, EdgeId, Graph, NodeId};
pub use mst::{is_mst, is_mst_by, minimum_spanning_tree};
pub use state::State;
pub use subsidy::SubsidyAssignment;
pub use tree::{PathToRoot, SpanningTree};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("duplicate node label {0:?}")]
    DuplicateNode(String),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("unknown node id {0}")]
    UnknownNodeId(usize),
    #[error("self-loop at node {0:?}")]
    SelfLoop(String),
    #[error("negative weight on edge {0}")]
    NegativeWeight(EdgeId),
    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),
    #[error("duplicate edge id {0}")]
    DuplicateEdgeId(EdgeId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("not a spanning tree: {0}")]
    NotSpanningTree(String),
    #[error("invalid path for player {player}: {reason}")]
    InvalidPath { player: usize, reason: String },
    #[error("invalid subsidy on edge {edge}: {reason}")]
    InvalidSubsidy { edge: EdgeId, reason: String },
    #[error("player index {0} out of range")]
    UnknownPlayer(usize),
    #[error("game has both or neither of \"root\" and \"pairs\"")]
    AmbiguousGame,
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
