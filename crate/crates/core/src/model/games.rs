use super::graph::{Graph, NodeId};
use super::ModelError;

/// Every non-root node hosts one player whose destination is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BroadcastGame {
    graph: Graph,
    root: NodeId,
}

impl BroadcastGame {
    pub fn new(graph: Graph, root: NodeId) -> Result<Self, ModelError> {
        if root >= graph.node_count() {
            return Err(ModelError::UnknownNodeId(root));
        }
        if !graph.is_connected() {
            return Err(ModelError::Disconnected);
        }
        Ok(BroadcastGame { graph, root })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn player_count(&self) -> usize {
        self.graph.node_count().saturating_sub(1)
    }

    /// Player nodes in ascending node id; player `i` of the general view is `players()[i]`.
    pub fn players(&self) -> impl Iterator<Item = NodeId> + '_ {
        let root = self.root;
        (0..self.graph.node_count()).filter(move |&v| v != root)
    }

    /// Index of the player hosted at `node` in the general view.
    pub fn player_index(&self, node: NodeId) -> Option<usize> {
        if node == self.root || node >= self.graph.node_count() {
            None
        } else if node < self.root {
            Some(node)
        } else {
            Some(node - 1)
        }
    }

    pub fn player_node(&self, index: usize) -> NodeId {
        if index < self.root {
            index
        } else {
            index + 1
        }
    }

    /// The same game with explicit (node, root) pairs in player order.
    pub fn to_general(&self) -> GeneralGame {
        let pairs = self.players().map(|u| (u, self.root)).collect();
        GeneralGame {
            graph: self.graph.clone(),
            pairs,
        }
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }
}

/// Each player connects its own source to its own destination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralGame {
    graph: Graph,
    pairs: Vec<(NodeId, NodeId)>,
}

impl GeneralGame {
    pub fn new(graph: Graph, pairs: Vec<(NodeId, NodeId)>) -> Result<Self, ModelError> {
        let n = graph.node_count();
        for &(s, t) in &pairs {
            if s >= n || t >= n {
                return Err(ModelError::UnknownNodeId(s.max(t)));
            }
        }
        if !graph.is_connected() {
            return Err(ModelError::Disconnected);
        }
        Ok(GeneralGame { graph, pairs })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn pairs(&self) -> &[(NodeId, NodeId)] {
        &self.pairs
    }

    pub fn player_count(&self) -> usize {
        self.pairs.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Game {
    Broadcast(BroadcastGame),
    General(GeneralGame),
}

impl Game {
    pub fn graph(&self) -> &Graph {
        match self {
            Game::Broadcast(g) => g.graph(),
            Game::General(g) => g.graph(),
        }
    }

    pub fn as_broadcast(&self) -> Option<&BroadcastGame> {
        match self {
            Game::Broadcast(g) => Some(g),
            Game::General(_) => None,
        }
    }

    /// General view; broadcast games are expanded into explicit pairs.
    pub fn to_general(&self) -> GeneralGame {
        match self {
            Game::Broadcast(g) => g.to_general(),
            Game::General(g) => g.clone(),
        }
    }

    /// Human-readable player name: the host node label for broadcast games,
    /// the player index otherwise.
    pub fn player_label(&self, index: usize) -> String {
        match self {
            Game::Broadcast(g) => g.graph().label(g.player_node(index)).to_string(),
            Game::General(_) => index.to_string(),
        }
    }
}
