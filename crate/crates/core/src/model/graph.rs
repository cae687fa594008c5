use std::collections::HashMap;

use num_traits::{Signed, Zero};

use super::ModelError;
use crate::rational::Rational;

pub type NodeId = usize;
pub type EdgeId = usize;

/// Undirected weighted edge. Parallel edges are distinguished by `id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: NodeId,
    pub v: NodeId,
    pub weight: Rational,
}

impl Edge {
    /// The endpoint opposite to `node`.
    pub fn other(&self, node: NodeId) -> NodeId {
        if node == self.u {
            self.v
        } else {
            debug_assert_eq!(node, self.v);
            self.u
        }
    }

    pub fn touches(&self, node: NodeId) -> bool {
        self.u == node || self.v == node
    }
}

/// Undirected multigraph with labelled nodes and dense node/edge ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<EdgeId>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(nodes: usize, edges: usize) -> Self {
        Graph {
            labels: Vec::with_capacity(nodes),
            index: HashMap::with_capacity(nodes),
            edges: Vec::with_capacity(edges),
            adjacency: Vec::with_capacity(nodes),
        }
    }

    pub fn add_node(&mut self, label: impl Into<String>) -> Result<NodeId, ModelError> {
        let label = label.into();
        if self.index.contains_key(&label) {
            return Err(ModelError::DuplicateNode(label));
        }
        let id = self.labels.len();
        self.index.insert(label.clone(), id);
        self.labels.push(label);
        self.adjacency.push(Vec::new());
        Ok(id)
    }

    /// Adds an edge with the next dense id. Rejects self-loops and negative weights.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId, weight: Rational) -> Result<EdgeId, ModelError> {
        let n = self.labels.len();
        if u >= n || v >= n {
            return Err(ModelError::UnknownNodeId(u.max(v)));
        }
        if u == v {
            return Err(ModelError::SelfLoop(self.labels[u].clone()));
        }
        if weight.is_negative() {
            return Err(ModelError::NegativeWeight(self.edges.len()));
        }
        let id = self.edges.len();
        self.edges.push(Edge { id, u, v, weight });
        self.adjacency[u].push(id);
        self.adjacency[v].push(id);
        Ok(id)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn weight(&self, id: EdgeId) -> &Rational {
        &self.edges[id].weight
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    /// Incident edge ids in ascending id order.
    pub fn incident(&self, node: NodeId) -> &[EdgeId] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &e in &self.adjacency[x] {
                let y = self.edges[e].other(x);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == n
    }

    /// wgt(A): exact total weight of an edge-id set.
    pub fn wgt<'a>(&self, ids: impl IntoIterator<Item = &'a EdgeId>) -> Result<Rational, ModelError> {
        let mut total = Rational::zero();
        for &id in ids {
            let edge = self.edges.get(id).ok_or(ModelError::UnknownEdge(id))?;
            total += &edge.weight;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn rejects_self_loops_and_negative_weights() {
        let mut g = Graph::new();
        let a = g.add_node("a").unwrap();
        let b = g.add_node("b").unwrap();
        assert!(matches!(g.add_edge(a, a, int(1)), Err(ModelError::SelfLoop(_))));
        assert!(matches!(g.add_edge(a, b, int(-1)), Err(ModelError::NegativeWeight(_))));
        assert!(matches!(g.add_node("a"), Err(ModelError::DuplicateNode(_))));
    }

    #[test]
    fn parallel_edges_get_distinct_ids() {
        let mut g = Graph::new();
        let a = g.add_node("a").unwrap();
        let b = g.add_node("b").unwrap();
        let e0 = g.add_edge(a, b, int(1)).unwrap();
        let e1 = g.add_edge(b, a, ratio(1, 2)).unwrap();
        assert_ne!(e0, e1);
        assert_eq!(g.incident(a), &[0, 1]);
        assert_eq!(g.wgt(&[0, 1]).unwrap(), ratio(3, 2));
        assert_eq!(g.wgt(&[]).unwrap(), int(0));
        assert!(matches!(g.wgt(&[7]), Err(ModelError::UnknownEdge(7))));
    }

    #[test]
    fn connectivity() {
        let mut g = Graph::new();
        let a = g.add_node("a").unwrap();
        let b = g.add_node("b").unwrap();
        let c = g.add_node("c").unwrap();
        g.add_edge(a, b, int(1)).unwrap();
        assert!(!g.is_connected());
        g.add_edge(c, b, int(1)).unwrap();
        assert!(g.is_connected());
    }
}
