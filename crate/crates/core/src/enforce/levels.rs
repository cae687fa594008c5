use num_traits::Zero;
use rayon::prelude::*;

use super::EnforceError;
use crate::model::{is_mst_by, BroadcastGame, EdgeId, Graph, SpanningTree};
use crate::rational::{to_f64, Rational};

/// Per-level slack allowed on float values before clamping.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// One {0, c} copy of the graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub index: usize,
    pub increment: Rational,
    /// Original weight at which an edge becomes heavy in this copy.
    pub threshold: Rational,
    /// Indexed by edge id.
    pub heavy: Vec<bool>,
    /// m_a per edge id: heavy players below a tree edge (0 off the tree).
    pub heavy_players: Vec<u64>,
}

impl Level {
    pub fn heavy_tree_edges(&self, tree: &SpanningTree) -> usize {
        tree.edges().iter().filter(|&&e| self.heavy[e]).count()
    }
}

/// Splits the weights into levels c_1 = w(1), c_j = w(j) − w(j−1) over the
/// distinct non-zero weights.
pub fn decompose(graph: &Graph, tree: &SpanningTree) -> Result<Vec<Level>, EnforceError> {
    let mut weights: Vec<&Rational> = graph.edges().iter().map(|e| &e.weight).filter(|w| !w.is_zero()).collect();
    weights.sort();
    weights.dedup();
    let mut levels = Vec::with_capacity(weights.len());
    let mut previous = Rational::zero();
    for (index, &threshold) in weights.iter().enumerate() {
        let heavy: Vec<bool> = graph.edges().iter().map(|e| e.weight >= *threshold).collect();
        let copy = |e: EdgeId| {
            if heavy[e] {
                Rational::from_integer(1.into())
            } else {
                Rational::zero()
            }
        };
        if !is_mst_by(graph, tree, copy) {
            return Err(EnforceError::NotMst);
        }
        let heavy_players = heavy_player_counts(graph, tree, &heavy);
        levels.push(Level {
            index: index + 1,
            increment: threshold - &previous,
            threshold: threshold.clone(),
            heavy,
            heavy_players,
        });
        previous = threshold.clone();
    }
    Ok(levels)
}

fn heavy_player_counts(graph: &Graph, tree: &SpanningTree, heavy: &[bool]) -> Vec<u64> {
    let n = graph.node_count();
    let mut below = vec![0u64; n];
    let mut out = vec![0u64; graph.edge_count()];
    for &v in tree.bfs_order().iter().rev() {
        if let (Some(e), Some(p)) = (tree.parent_edge(v), tree.parent(v)) {
            if heavy[e] {
                below[v] += 1;
            }
            out[e] = below[v];
            below[p] += below[v];
        }
    }
    out
}

/// vc(a, y) = c·ln(m_a / (m_a − 1 + y/c)); zero on light edges, +∞ at m_a = 1, y = 0.
pub fn virtual_cost(level: &Level, edge: EdgeId, y: f64) -> Result<f64, EnforceError> {
    let c = to_f64(&level.increment);
    if !(-FLOAT_TOLERANCE..=c + FLOAT_TOLERANCE).contains(&y) {
        return Err(EnforceError::OutOfRange {
            y: y.to_string(),
            c: c.to_string(),
        });
    }
    if !level.heavy[edge] {
        return Ok(0.0);
    }
    let m = level.heavy_players[edge];
    if m == 0 {
        return Err(EnforceError::NotTreeEdge(edge));
    }
    let m = m as f64;
    let y = y.clamp(0.0, c);
    if y == 0.0 {
        return Ok(if m == 1.0 { f64::INFINITY } else { -c * (-1.0 / m).ln_1p() });
    }
    // m / (m − 1 + y/c) = 1 / (1 − (c − y)/(m c))
    Ok(-c * (-(c - y) / (m * c)).ln_1p())
}

/// Subsidies of one level together with the cut S and the unsubsidized root prefixes.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSubsidy {
    pub index: usize,
    /// Indexed by edge id.
    pub values: Vec<f64>,
    pub cut: Vec<EdgeId>,
    /// vc(T_v, 0) / c per node.
    pub prefix: Vec<f64>,
}

impl LevelSubsidy {
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Heavy edges strictly below the cut are paid in full, cut edges by formula, the rest get nothing.
pub fn enforce_level(graph: &Graph, tree: &SpanningTree, level: &Level) -> LevelSubsidy {
    let c = to_f64(&level.increment);
    let n = graph.node_count();
    let mut prefix = vec![0.0f64; n];
    let mut values = vec![0.0f64; graph.edge_count()];
    let mut cut = Vec::new();
    for &v in tree.bfs_order() {
        let (Some(e), Some(p)) = (tree.parent_edge(v), tree.parent(v)) else {
            continue;
        };
        if !level.heavy[e] {
            prefix[v] = prefix[p];
            continue;
        }
        let m = level.heavy_players[e];
        let step = if m == 1 {
            f64::INFINITY
        } else {
            -(-1.0 / m as f64).ln_1p()
        };
        prefix[v] = prefix[p] + step;
        if prefix[p] >= 1.0 {
            values[e] = c;
        } else if prefix[v] >= 1.0 {
            // c(1 − m(1 − exp(P_p − 1)))
            let raw = c * (1.0 + m as f64 * (prefix[p] - 1.0).exp_m1());
            values[e] = raw.clamp(0.0, c);
            cut.push(e);
        }
    }
    cut.sort_unstable();
    LevelSubsidy {
        index: level.index,
        values,
        cut,
        prefix,
    }
}

/// Float subsidies assembled across levels.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalEnforcement {
    /// Indexed by edge id, each within [0, w_a].
    pub values: Vec<f64>,
    pub total: f64,
    pub levels: Vec<LevelSubsidy>,
}

impl FractionalEnforcement {
    /// Non-zero entries in ascending edge id.
    pub fn nonzero(&self) -> Vec<(EdgeId, f64)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(e, v)| (e, *v))
            .collect()
    }
}

pub fn enforce_fractional(game: &BroadcastGame, tree: &SpanningTree) -> Result<FractionalEnforcement, EnforceError> {
    let graph = game.graph();
    let levels = decompose(graph, tree)?;
    let per_level: Vec<LevelSubsidy> = levels.par_iter().map(|l| enforce_level(graph, tree, l)).collect();
    let mut values = vec![0.0f64; graph.edge_count()];
    for level in &per_level {
        for (e, v) in level.values.iter().enumerate() {
            values[e] += v;
        }
    }
    for (e, v) in values.iter_mut().enumerate() {
        *v = v.clamp(0.0, to_f64(graph.weight(e)));
    }
    let total = values.iter().sum();
    Ok(FractionalEnforcement {
        values,
        total,
        levels: per_level,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::minimum_spanning_tree;
    use crate::rational::int;
    use std::f64::consts::E;

    fn weighted_path(weights: &[i64]) -> (BroadcastGame, SpanningTree) {
        let mut g = Graph::new();
        g.add_node("r").unwrap();
        for i in 0..weights.len() {
            g.add_node(format!("v{}", i + 1)).unwrap();
        }
        for (i, &w) in weights.iter().enumerate() {
            g.add_edge(i, i + 1, int(w)).unwrap();
        }
        let game = BroadcastGame::new(g, 0).unwrap();
        let tree = minimum_spanning_tree(game.graph(), 0).unwrap();
        (game, tree)
    }

    #[test]
    fn decomposition_levels() {
        let (game, tree) = weighted_path(&[0, 1, 1, 3]);
        let levels = decompose(game.graph(), &tree).unwrap();
        assert_eq!(levels.len(), 2);
        assert_eq!(levels[0].increment, int(1));
        assert_eq!(levels[0].heavy, vec![false, true, true, true]);
        assert_eq!(levels[1].increment, int(2));
        assert_eq!(levels[1].heavy, vec![false, false, false, true]);
        assert_eq!(levels[0].heavy_players, vec![3, 3, 2, 1]);
    }

    #[test]
    fn unit_path_trace() {
        let (game, tree) = weighted_path(&[1, 1, 1]);
        let levels = decompose(game.graph(), &tree).unwrap();
        let s = enforce_level(game.graph(), &tree, &levels[0]);
        assert_eq!(s.cut, vec![1]);
        assert_eq!(s.values[0], 0.0);
        assert!((s.values[1] - (3.0 / E - 1.0)).abs() < 1e-12);
        assert_eq!(s.values[2], 1.0);
        assert!((s.total() - 3.0 / E).abs() < 1e-12);
    }

    #[test]
    fn virtual_cost_values() {
        let (game, tree) = weighted_path(&[1, 1, 1]);
        let level = &decompose(game.graph(), &tree).unwrap()[0];
        assert_eq!(virtual_cost(level, 0, 1.0).unwrap(), 0.0);
        assert_eq!(virtual_cost(level, 2, 0.0).unwrap(), f64::INFINITY);
        assert!((virtual_cost(level, 1, 0.0).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!(virtual_cost(level, 1, 1.5).is_err());
    }

    #[test]
    fn rejects_non_mst() {
        let mut g = Graph::new();
        for l in ["r", "a", "b"] {
            g.add_node(l).unwrap();
        }
        g.add_edge(0, 1, int(1)).unwrap();
        g.add_edge(1, 2, int(2)).unwrap();
        g.add_edge(2, 0, int(3)).unwrap();
        let game = BroadcastGame::new(g, 0).unwrap();
        let tree = SpanningTree::new(game.graph(), 0, [1, 2]).unwrap();
        assert_eq!(enforce_fractional(&game, &tree), Err(EnforceError::NotMst));
    }
}
