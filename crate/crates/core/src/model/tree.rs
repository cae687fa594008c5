use std::collections::VecDeque;

use super::graph::{EdgeId, Graph, NodeId};
use super::ModelError;
use crate::rational::Rational;

/// A spanning tree rooted at `root`, with parent pointers and per-edge usage
/// counts `n_a(T)` for the broadcast game on the same graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    root: NodeId,
    edges: Vec<EdgeId>,
    in_tree: Vec<bool>,
    parent_edge: Vec<Option<EdgeId>>,
    parent: Vec<Option<NodeId>>,
    depth: Vec<usize>,
    usage: Vec<u64>,
    order: Vec<NodeId>,
}

impl SpanningTree {
    pub fn new(
        graph: &Graph,
        root: NodeId,
        edges: impl IntoIterator<Item = EdgeId>,
    ) -> Result<Self, ModelError> {
        let n = graph.node_count();
        let m = graph.edge_count();
        if root >= n {
            return Err(ModelError::UnknownNodeId(root));
        }
        let mut in_tree = vec![false; m];
        let mut list = Vec::new();
        for e in edges {
            if e >= m {
                return Err(ModelError::UnknownEdge(e));
            }
            if in_tree[e] {
                return Err(ModelError::NotSpanningTree(format!("edge {e} listed twice")));
            }
            in_tree[e] = true;
            list.push(e);
        }
        list.sort_unstable();
        if list.len() + 1 != n {
            return Err(ModelError::NotSpanningTree(format!(
                "{} edges for {} nodes",
                list.len(),
                n
            )));
        }

        let mut parent_edge = vec![None; n];
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &e in graph.incident(x) {
                if !in_tree[e] {
                    continue;
                }
                let y = graph.edge(e).other(x);
                if seen[y] {
                    continue;
                }
                seen[y] = true;
                parent_edge[y] = Some(e);
                parent[y] = Some(x);
                depth[y] = depth[x] + 1;
                queue.push_back(y);
            }
        }
        if order.len() != n {
            return Err(ModelError::NotSpanningTree(format!(
                "only {} of {} nodes reachable from the root",
                order.len(),
                n
            )));
        }

        let mut subtree = vec![1u64; n];
        let mut usage = vec![0u64; m];
        for &v in order.iter().rev() {
            if let (Some(e), Some(p)) = (parent_edge[v], parent[v]) {
                usage[e] = subtree[v];
                subtree[p] += subtree[v];
            }
        }

        Ok(SpanningTree {
            root,
            edges: list,
            in_tree,
            parent_edge,
            parent,
            depth,
            usage,
            order,
        })
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// Tree edge ids in ascending order.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn contains(&self, edge: EdgeId) -> bool {
        self.in_tree.get(edge).copied().unwrap_or(false)
    }

    pub fn parent_edge(&self, node: NodeId) -> Option<EdgeId> {
        self.parent_edge[node]
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        self.parent[node]
    }

    pub fn depth(&self, node: NodeId) -> usize {
        self.depth[node]
    }

    /// n_a(T): number of players whose root path crosses `edge` (zero off the tree).
    pub fn usage(&self, edge: EdgeId) -> u64 {
        self.usage.get(edge).copied().unwrap_or(0)
    }

    /// Breadth-first order from the root.
    pub fn bfs_order(&self) -> &[NodeId] {
        &self.order
    }

    /// Tree edges from `node` up to the root (T_u).
    pub fn path_to_root(&self, node: NodeId) -> PathToRoot<'_> {
        PathToRoot { tree: self, at: node }
    }

    pub fn lca(&self, mut a: NodeId, mut b: NodeId) -> NodeId {
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].expect("non-root has parent");
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].expect("non-root has parent");
        }
        while a != b {
            a = self.parent[a].expect("non-root has parent");
            b = self.parent[b].expect("non-root has parent");
        }
        a
    }

    /// Is `ancestor` on the root path of `node` (inclusive)?
    pub fn is_ancestor(&self, ancestor: NodeId, mut node: NodeId) -> bool {
        if self.depth[node] < self.depth[ancestor] {
            return false;
        }
        while self.depth[node] > self.depth[ancestor] {
            node = self.parent[node].expect("non-root has parent");
        }
        node == ancestor
    }

    /// Edges of the unique tree path between `a` and `b`.
    pub fn tree_path(&self, a: NodeId, b: NodeId) -> Vec<EdgeId> {
        let top = self.lca(a, b);
        let mut left = Vec::new();
        let mut x = a;
        while x != top {
            left.push(self.parent_edge[x].expect("below lca"));
            x = self.parent[x].expect("below lca");
        }
        let mut right = Vec::new();
        let mut y = b;
        while y != top {
            right.push(self.parent_edge[y].expect("below lca"));
            y = self.parent[y].expect("below lca");
        }
        right.reverse();
        left.extend(right);
        left
    }

    /// Children lists indexed by node, in ascending child id.
    pub fn children(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.parent.len()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                out[*p].push(v);
            }
        }
        out
    }

    pub fn weight(&self, graph: &Graph) -> Rational {
        graph.wgt(&self.edges).expect("tree edges belong to the graph")
    }

    /// The child endpoint of a tree edge.
    pub fn child_of(&self, graph: &Graph, edge: EdgeId) -> NodeId {
        let e = graph.edge(edge);
        if self.parent_edge[e.u] == Some(edge) {
            e.u
        } else {
            e.v
        }
    }
}

pub struct PathToRoot<'a> {
    tree: &'a SpanningTree,
    at: NodeId,
}

impl Iterator for PathToRoot<'_> {
    type Item = EdgeId;

    fn next(&mut self) -> Option<EdgeId> {
        let e = self.tree.parent_edge[self.at]?;
        self.at = self.tree.parent[self.at].expect("edge implies parent");
        Some(e)
    }
}
