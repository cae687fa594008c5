use petgraph::unionfind::UnionFind;

use super::graph::{EdgeId, Graph, NodeId};
use super::tree::SpanningTree;
use super::ModelError;
use crate::rational::Rational;

/// Kruskal; equal weights are taken in ascending edge id.
pub fn minimum_spanning_tree(graph: &Graph, root: NodeId) -> Result<SpanningTree, ModelError> {
    if !graph.is_connected() {
        return Err(ModelError::Disconnected);
    }
    let mut order: Vec<EdgeId> = (0..graph.edge_count()).collect();
    order.sort_by(|&a, &b| graph.weight(a).cmp(graph.weight(b)).then(a.cmp(&b)));
    let mut uf = UnionFind::<usize>::new(graph.node_count());
    let mut chosen = Vec::with_capacity(graph.node_count().saturating_sub(1));
    for e in order {
        let edge = graph.edge(e);
        if uf.union(edge.u, edge.v) {
            chosen.push(e);
        }
    }
    SpanningTree::new(graph, root, chosen)
}

/// Cycle condition: each non-tree edge weighs at least every tree edge on its cycle.
pub fn is_mst(graph: &Graph, tree: &SpanningTree) -> bool {
    is_mst_by(graph, tree, |e| graph.weight(e).clone())
}

/// [`is_mst`] under an arbitrary weight function, used for level copies.
pub fn is_mst_by(graph: &Graph, tree: &SpanningTree, weight: impl Fn(EdgeId) -> Rational) -> bool {
    graph.edges().iter().filter(|e| !tree.contains(e.id)).all(|e| {
        let w = weight(e.id);
        tree.tree_path(e.u, e.v).into_iter().all(|t| weight(t) <= w)
    })
}
