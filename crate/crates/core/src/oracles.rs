//! Brute-force ground truth: spanning-tree enumeration, best equilibria,
//! price of stability and grid subsidy search.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::game::is_equilibrium_broadcast;
use crate::model::{minimum_spanning_tree, BroadcastGame, EdgeId, Graph, ModelError, SpanningTree, SubsidyAssignment};
use crate::rational::Rational;

pub const DEFAULT_TREE_CAP: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("more than {cap} candidates (enumerated {count})")]
    CapExceeded { cap: usize, count: usize },
    #[error("no spanning tree is an equilibrium")]
    NoEquilibrium,
    #[error("grid denominator must be positive")]
    BadDenominator,
    #[error(transparent)]
    Model(#[from] ModelError),
}

struct Frame {
    next: EdgeId,
    chosen: Vec<EdgeId>,
    component: Vec<usize>,
}

/// Contraction–deletion enumeration: each edge in id order is either
/// contracted into the tree or deleted, deletions only while the rest stays connected.
pub struct SpanningTrees<'g> {
    graph: &'g Graph,
    root: usize,
    stack: Vec<Frame>,
    cap: usize,
    yielded: usize,
    failed: bool,
}

pub fn enumerate_spanning_trees(graph: &Graph, root: usize, cap: usize) -> SpanningTrees<'_> {
    let n = graph.node_count();
    let stack = if graph.is_connected() && n > 0 {
        vec![Frame {
            next: 0,
            chosen: Vec::new(),
            component: (0..n).collect(),
        }]
    } else {
        Vec::new()
    };
    SpanningTrees {
        graph,
        root,
        stack,
        cap,
        yielded: 0,
        failed: false,
    }
}

fn still_connected(graph: &Graph, component: &[usize], from: EdgeId) -> bool {
    let n = component.len();
    let mut uf = petgraph::unionfind::UnionFind::<usize>::new(n);
    for (v, &c) in component.iter().enumerate() {
        uf.union(v, c);
    }
    for e in &graph.edges()[from..] {
        uf.union(e.u, e.v);
    }
    let r = uf.find(0);
    (1..n).all(|v| uf.find(v) == r)
}

impl Iterator for SpanningTrees<'_> {
    type Item = Result<SpanningTree, OracleError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let target = self.graph.node_count() - 1;
        while let Some(frame) = self.stack.pop() {
            if frame.chosen.len() == target {
                if self.yielded == self.cap {
                    self.failed = true;
                    self.stack.clear();
                    return Some(Err(OracleError::CapExceeded {
                        cap: self.cap,
                        count: self.yielded,
                    }));
                }
                self.yielded += 1;
                let tree = SpanningTree::new(self.graph, self.root, frame.chosen).map_err(OracleError::from);
                return Some(tree);
            }
            let e = frame.next;
            if e >= self.graph.edge_count() {
                continue;
            }
            let edge = self.graph.edge(e);
            let (cu, cv) = (frame.component[edge.u], frame.component[edge.v]);
            if still_connected(self.graph, &frame.component, e + 1) {
                self.stack.push(Frame {
                    next: e + 1,
                    chosen: frame.chosen.clone(),
                    component: frame.component.clone(),
                });
            }
            if cu != cv {
                let (keep, drop) = (cu.min(cv), cu.max(cv));
                let component = frame.component.iter().map(|&c| if c == drop { keep } else { c }).collect();
                let mut chosen = frame.chosen;
                chosen.push(e);
                self.stack.push(Frame {
                    next: e + 1,
                    chosen,
                    component,
                });
            }
        }
        None
    }
}

/// Minimum-weight spanning tree that is an equilibrium without subsidies.
/// Ties go to the lexicographically smallest edge set.
pub fn best_equilibrium(game: &BroadcastGame, cap: usize) -> Result<Option<(SpanningTree, Rational)>, OracleError> {
    const CHUNK: usize = 4096;
    let graph = game.graph();
    let none = SubsidyAssignment::zero();
    let mut best: Option<(Rational, SpanningTree)> = None;
    let mut trees = enumerate_spanning_trees(graph, game.root(), cap);
    loop {
        let mut chunk = Vec::with_capacity(CHUNK);
        for item in trees.by_ref().take(CHUNK) {
            chunk.push(item?);
        }
        if chunk.is_empty() {
            break;
        }
        let local = chunk
            .into_par_iter()
            .filter(|t| is_equilibrium_broadcast(game, t, &none).is_ok())
            .map(|t| (t.weight(graph), t))
            .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.edges().cmp(b.1.edges())));
        if let Some(candidate) = local {
            let better = match &best {
                None => true,
                Some(b) => candidate.0 < b.0 || (candidate.0 == b.0 && candidate.1.edges() < b.1.edges()),
            };
            if better {
                best = Some(candidate);
            }
        }
    }
    Ok(best.map(|(w, t)| (t, w)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosReport {
    pub pos: Rational,
    pub best_eq_weight: Rational,
    pub mst_weight: Rational,
}

/// Best-equilibrium weight over MST weight; 1 when the MST weighs nothing.
pub fn price_of_stability(game: &BroadcastGame, cap: usize) -> Result<PosReport, OracleError> {
    let mst_weight = minimum_spanning_tree(game.graph(), game.root())?.weight(game.graph());
    let (_, best_eq_weight) = best_equilibrium(game, cap)?.ok_or(OracleError::NoEquilibrium)?;
    let pos = if mst_weight.is_zero() {
        Rational::one()
    } else {
        &best_eq_weight / &mst_weight
    };
    Ok(PosReport {
        pos,
        best_eq_weight,
        mst_weight,
    })
}

/// Cheapest enforcing assignment with b_a ∈ {0, 1/D, 2/D, …} ∪ {w_a} on tree edges,
/// visited in order of increasing total.
pub fn grid_min_subsidy(game: &BroadcastGame, tree: &SpanningTree, denominator: u64, cap: usize) -> Result<Rational, OracleError> {
    if denominator == 0 {
        return Err(OracleError::BadDenominator);
    }
    let graph = game.graph();
    let step = Rational::new(BigInt::one(), BigInt::from(denominator));
    let edges = tree.edges().to_vec();
    let grids: Vec<Vec<Rational>> = edges
        .iter()
        .map(|&e| {
            let w = graph.weight(e);
            let mut values = Vec::new();
            let mut v = Rational::zero();
            while v < *w {
                values.push(v.clone());
                v += &step;
            }
            values.push(w.clone());
            values
        })
        .collect();
    let total = |idx: &[usize]| -> Rational {
        idx.iter().zip(&grids).fold(Rational::zero(), |acc, (&i, g)| acc + &g[i])
    };
    let start = vec![0usize; edges.len()];
    let mut heap = BinaryHeap::new();
    let mut seen = HashSet::new();
    heap.push(Reverse((total(&start), start.clone())));
    seen.insert(start);
    let mut visited = 0usize;
    while let Some(Reverse((cost, idx))) = heap.pop() {
        visited += 1;
        if visited > cap {
            return Err(OracleError::CapExceeded { cap, count: cap });
        }
        let b = SubsidyAssignment::new(
            edges.iter().zip(&idx).zip(&grids).map(|((&e, &i), g)| (e, g[i].clone())),
            false,
        );
        if is_equilibrium_broadcast(game, tree, &b).is_ok() {
            return Ok(cost);
        }
        for j in 0..idx.len() {
            if idx[j] + 1 < grids[j].len() {
                let mut next = idx.clone();
                next[j] += 1;
                if seen.insert(next.clone()) {
                    heap.push(Reverse((total(&next), next)));
                }
            }
        }
    }
    unreachable!("full subsidies always enforce")
}
