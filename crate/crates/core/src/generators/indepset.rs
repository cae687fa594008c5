use num_traits::{One, Zero};

use super::GenError;
use crate::model::{BroadcastGame, EdgeId, Graph, NodeId, SpanningTree};
use crate::rational::{int, ratio, Rational};

/// Simple undirected graph on nodes 0..nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicGraph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl CubicGraph {
    pub fn complete4() -> Self {
        CubicGraph {
            nodes: 4,
            edges: vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        }
    }
}

#[derive(Debug, Clone)]
pub struct IndepSetInstance {
    pub game: BroadcastGame,
    pub h: CubicGraph,
    pub delta: Rational,
    /// Game node of each node of H.
    pub u_nodes: Vec<NodeId>,
    /// Game node of each edge of H.
    pub v_nodes: Vec<NodeId>,
    /// Root edge per game node (None for the root).
    pub root_edges: Vec<Option<EdgeId>>,
    /// Per edge j = (a, b) of H: the edges (v_j, u_a) and (v_j, u_b).
    pub uv_edges: Vec<[EdgeId; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BranchType {
    A,
    B,
    C,
    D,
    E,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub top: NodeId,
    pub root_edge: EdgeId,
    pub nodes: Vec<NodeId>,
    pub kind: BranchType,
}

pub fn gen_indepset(h: &CubicGraph, delta: &Rational) -> Result<IndepSetInstance, GenError> {
    if !(*delta > Rational::zero() && *delta <= ratio(1, 12)) {
        return Err(GenError::Parameter(format!("delta {delta} is outside (0, 1/12]")));
    }
    let mut degree = vec![0usize; h.nodes];
    for &(a, b) in &h.edges {
        if a >= h.nodes || b >= h.nodes || a == b {
            return Err(GenError::Parameter(format!("bad edge ({a}, {b})")));
        }
        degree[a] += 1;
        degree[b] += 1;
    }
    if let Some((node, &degree)) = degree.iter().enumerate().find(|(_, &d)| d != 3) {
        return Err(GenError::NotCubic { node, degree });
    }
    let mut g = Graph::with_capacity(1 + h.nodes + h.edges.len(), h.nodes + 3 * h.edges.len());
    let r = g.add_node("r")?;
    let u_nodes = (0..h.nodes)
        .map(|a| g.add_node(format!("u{a}")))
        .collect::<Result<Vec<_>, _>>()?;
    let v_nodes = h
        .edges
        .iter()
        .map(|&(a, b)| g.add_node(format!("e{a}-{b}")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut root_edges = vec![None; g.node_count()];
    for &x in u_nodes.iter().chain(&v_nodes) {
        root_edges[x] = Some(g.add_edge(r, x, int(1))?);
    }
    let w = (int(2) + delta) / int(3);
    let mut uv_edges = Vec::with_capacity(h.edges.len());
    for (j, &(a, b)) in h.edges.iter().enumerate() {
        let ea = g.add_edge(v_nodes[j], u_nodes[a], w.clone())?;
        let eb = g.add_edge(v_nodes[j], u_nodes[b], w.clone())?;
        uv_edges.push([ea, eb]);
    }
    Ok(IndepSetInstance {
        game: BroadcastGame::new(g, r)?,
        h: h.clone(),
        delta: delta.clone(),
        u_nodes,
        v_nodes,
        root_edges,
        uv_edges,
    })
}

impl IndepSetInstance {
    /// Type-B branch for each member of `set`, type A for everything else.
    pub fn tree_for(&self, set: &[usize]) -> Result<SpanningTree, GenError> {
        let mut chosen = vec![false; self.h.nodes];
        for &a in set {
            if a >= self.h.nodes {
                return Err(GenError::Parameter(format!("node {a} is not in H")));
            }
            chosen[a] = true;
        }
        for &(a, b) in &self.h.edges {
            if chosen[a] && chosen[b] {
                return Err(GenError::NotIndependent(a, b));
            }
        }
        let mut edges = Vec::new();
        for a in 0..self.h.nodes {
            edges.push(self.root_edges[self.u_nodes[a]].unwrap());
        }
        for (j, &(a, b)) in self.h.edges.iter().enumerate() {
            if chosen[a] {
                edges.push(self.uv_edges[j][0]);
            } else if chosen[b] {
                edges.push(self.uv_edges[j][1]);
            } else {
                edges.push(self.root_edges[self.v_nodes[j]].unwrap());
            }
        }
        Ok(SpanningTree::new(self.game.graph(), self.game.root(), edges)?)
    }

    /// 5n/2 − (1−δ)m for n = |U| and m = |I|.
    pub fn expected_weight(&self, m: usize) -> Rational {
        ratio(5 * self.h.nodes as i64, 2) - (Rational::one() - &self.delta) * int(m as i64)
    }

    pub fn is_u_node(&self, node: NodeId) -> bool {
        (1..=self.h.nodes).contains(&node)
    }
}

/// Splits a spanning tree into root branches and types them by depth and shape.
pub fn classify_branches(instance: &IndepSetInstance, tree: &SpanningTree) -> Vec<Branch> {
    let root = instance.game.root();
    let children = tree.children();
    let mut out = Vec::new();
    for &top in &children[root] {
        let mut nodes = vec![top];
        let mut depth = 1;
        let mut frontier = vec![top];
        while !frontier.is_empty() {
            let next: Vec<NodeId> = frontier.iter().flat_map(|&v| children[v].iter().copied()).collect();
            if next.is_empty() {
                break;
            }
            depth += 1;
            nodes.extend(&next);
            frontier = next;
        }
        let kind = match depth {
            1 => BranchType::A,
            2 if instance.is_u_node(top) && children[top].len() == 3 => BranchType::B,
            2 => BranchType::C,
            3 => BranchType::D,
            _ => BranchType::E,
        };
        nodes.sort_unstable();
        out.push(Branch {
            top,
            root_edge: tree.parent_edge(top).expect("branch top has a parent"),
            nodes,
            kind,
        });
    }
    out.sort_by_key(|b| b.top);
    out
}
