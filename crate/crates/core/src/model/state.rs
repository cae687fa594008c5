use super::graph::{EdgeId, Graph, NodeId};
use super::tree::SpanningTree;
use super::ModelError;
use crate::rational::Rational;

/// A strategy profile: one simple path per player, plus usage counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    paths: Vec<Vec<EdgeId>>,
    sorted: Vec<Vec<EdgeId>>,
    usage: Vec<u64>,
}

impl State {
    /// Validates each path as a simple walk from `pairs[i].0` to `pairs[i].1`.
    pub fn new(
        graph: &Graph,
        pairs: &[(NodeId, NodeId)],
        paths: Vec<Vec<EdgeId>>,
    ) -> Result<Self, ModelError> {
        if paths.len() != pairs.len() {
            return Err(ModelError::InvalidPath {
                player: paths.len().min(pairs.len()),
                reason: format!("{} paths for {} players", paths.len(), pairs.len()),
            });
        }
        let n = graph.node_count();
        for (player, (path, &(s, t))) in paths.iter().zip(pairs).enumerate() {
            let bad = |reason: String| ModelError::InvalidPath { player, reason };
            let mut visited = vec![false; n];
            let mut at = s;
            visited[at] = true;
            for &e in path {
                if e >= graph.edge_count() {
                    return Err(ModelError::UnknownEdge(e));
                }
                let edge = graph.edge(e);
                if !edge.touches(at) {
                    return Err(bad(format!("edge {e} does not leave node {}", graph.label(at))));
                }
                at = edge.other(at);
                if visited[at] {
                    return Err(bad(format!("revisits node {}", graph.label(at))));
                }
                visited[at] = true;
            }
            if at != t {
                return Err(bad(format!("ends at {} instead of {}", graph.label(at), graph.label(t))));
            }
        }
        Ok(Self::from_paths(graph.edge_count(), paths))
    }

    fn from_paths(edge_count: usize, paths: Vec<Vec<EdgeId>>) -> Self {
        let mut usage = vec![0u64; edge_count];
        let sorted = paths
            .iter()
            .map(|p| {
                let mut s = p.clone();
                s.sort_unstable();
                for &e in &s {
                    usage[e] += 1;
                }
                s
            })
            .collect();
        State { paths, sorted, usage }
    }

    /// The broadcast profile where player `i` follows T from `players[i]` to the root.
    pub fn from_tree(graph: &Graph, tree: &SpanningTree, players: impl IntoIterator<Item = NodeId>) -> Self {
        let paths = players
            .into_iter()
            .map(|u| tree.path_to_root(u).collect())
            .collect();
        Self::from_paths(graph.edge_count(), paths)
    }

    /// Each player takes the unique forest path between its endpoints.
    pub fn from_forest(
        graph: &Graph,
        pairs: &[(NodeId, NodeId)],
        tree: &SpanningTree,
    ) -> Self {
        let paths = pairs.iter().map(|&(s, t)| tree.tree_path(s, t)).collect();
        Self::from_paths(graph.edge_count(), paths)
    }

    pub fn player_count(&self) -> usize {
        self.paths.len()
    }

    pub fn path(&self, player: usize) -> &[EdgeId] {
        &self.paths[player]
    }

    pub fn paths(&self) -> &[Vec<EdgeId>] {
        &self.paths
    }

    /// n_a(T).
    pub fn usage(&self, edge: EdgeId) -> u64 {
        self.usage[edge]
    }

    pub fn usage_counts(&self) -> &[u64] {
        &self.usage
    }

    /// n^i_a(T) as a boolean.
    pub fn uses(&self, player: usize, edge: EdgeId) -> bool {
        self.sorted[player].binary_search(&edge).is_ok()
    }

    /// Edges with at least one user, ascending.
    pub fn established(&self) -> Vec<EdgeId> {
        (0..self.usage.len()).filter(|&e| self.usage[e] > 0).collect()
    }

    pub fn weight(&self, graph: &Graph) -> Rational {
        graph
            .wgt(&self.established())
            .expect("state edges belong to the graph")
    }

    /// Copy of the state with player `i` switched to `path` (not validated).
    pub fn with_path(&self, player: usize, path: Vec<EdgeId>) -> State {
        let mut next = self.clone();
        for &e in &next.sorted[player] {
            next.usage[e] -= 1;
        }
        let mut s = path.clone();
        s.sort_unstable();
        for &e in &s {
            next.usage[e] += 1;
        }
        next.sorted[player] = s;
        next.paths[player] = path;
        next
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn triangle() -> Graph {
        let mut g = Graph::new();
        for l in ["r", "a", "b"] {
            g.add_node(l).unwrap();
        }
        g.add_edge(0, 1, int(1)).unwrap();
        g.add_edge(1, 2, int(1)).unwrap();
        g.add_edge(2, 0, int(1)).unwrap();
        g
    }

    #[test]
    fn validates_paths() {
        let g = triangle();
        let pairs = [(1, 0), (2, 0)];
        let s = State::new(&g, &pairs, vec![vec![0], vec![1, 0]]).unwrap();
        assert_eq!(s.usage(0), 2);
        assert_eq!(s.usage(2), 0);
        assert!(s.uses(1, 1));
        assert!(State::new(&g, &pairs, vec![vec![0], vec![0]]).is_err());
        assert!(State::new(&g, &pairs, vec![vec![0, 1, 2], vec![2]]).is_err());
    }

    #[test]
    fn tree_usage_matches_paths() {
        let g = triangle();
        let t = SpanningTree::new(&g, 0, [0, 1]).unwrap();
        let s = State::from_tree(&g, &t, [1, 2]);
        for e in 0..3 {
            assert_eq!(s.usage(e), t.usage(e));
        }
        let moved = s.with_path(1, vec![2]);
        assert_eq!(moved.usage_counts(), &[1, 0, 1]);
    }
}
