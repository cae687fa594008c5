use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::cost::path_share;
use super::response::best_response;
use crate::model::{BroadcastGame, EdgeId, Game, GeneralGame, Graph, NodeId, SpanningTree, State, SubsidyAssignment};
use crate::rational::{format_rational, Rational};

/// Outcome of an equilibrium check. `player` is the index in the general view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Violation {
        player: usize,
        path: Vec<EdgeId>,
        gain: Rational,
    },
}

#[derive(Serialize)]
struct VerdictJson {
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    player: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gain: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<Vec<EdgeId>>,
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }

    pub fn to_json(&self, game: &Game) -> String {
        let record = match self {
            Verdict::Ok => VerdictJson {
                ok: true,
                player: None,
                gain: None,
                path: None,
            },
            Verdict::Violation { player, path, gain } => VerdictJson {
                ok: false,
                player: Some(game.player_label(*player)),
                gain: Some(format_rational(gain)),
                path: Some(path.clone()),
            },
        };
        crate::model::io::to_json_line(&record)
    }
}

/// Every player compares its cost with an exact best response; ties are not deviations.
pub fn is_equilibrium_general(game: &GeneralGame, state: &State, subsidies: &SubsidyAssignment) -> Verdict {
    for player in 0..game.player_count() {
        let current = path_share(game.graph(), state, subsidies, state.path(player));
        let (path, cost) = best_response(game, state, subsidies, player);
        if cost < current {
            return Verdict::Violation {
                player,
                path,
                gain: current - cost,
            };
        }
    }
    Verdict::Ok
}

/// Per-node root costs: `shared[v]` = Σ_{a∈T_v} r_a/n_a, `joined[v]` = Σ_{a∈T_v} r_a/(n_a+1).
struct RootCosts {
    shared: Vec<Rational>,
    joined: Vec<Rational>,
}

impl RootCosts {
    fn new(graph: &Graph, tree: &SpanningTree, residual: impl Fn(EdgeId) -> Rational) -> Self {
        let n = graph.node_count();
        let mut shared = vec![Rational::zero(); n];
        let mut joined = vec![Rational::zero(); n];
        for &v in tree.bfs_order() {
            if let (Some(e), Some(p)) = (tree.parent_edge(v), tree.parent(v)) {
                let r = residual(e);
                let k = tree.usage(e);
                shared[v] = &shared[p] + &r / Rational::from_integer(BigInt::from(k));
                joined[v] = &joined[p] + r / Rational::from_integer(BigInt::from(k + 1));
            }
        }
        RootCosts { shared, joined }
    }
}

/// The tree-local check: only single-edge detours onto another root path.
pub fn is_equilibrium_broadcast(game: &BroadcastGame, tree: &SpanningTree, subsidies: &SubsidyAssignment) -> Verdict {
    broadcast_check_among(game, tree, subsidies, game.players())
}

/// The tree-local check over a subset of player nodes.
pub fn broadcast_check_among(
    game: &BroadcastGame,
    tree: &SpanningTree,
    subsidies: &SubsidyAssignment,
    nodes: impl IntoIterator<Item = NodeId>,
) -> Verdict {
    let graph = game.graph();
    let costs = RootCosts::new(graph, tree, |e| subsidies.residual(graph, e));
    for u in nodes {
        if u == game.root() {
            continue;
        }
        if let Some((v, e, gain)) = first_detour(graph, tree, &costs, u, |e| subsidies.residual(graph, e)) {
            let mut path = vec![e];
            path.extend(tree.path_to_root(v));
            return Verdict::Violation {
                player: game.player_index(u).expect("non-root"),
                path,
                gain,
            };
        }
    }
    Verdict::Ok
}

fn first_detour(
    graph: &Graph,
    tree: &SpanningTree,
    costs: &RootCosts,
    u: NodeId,
    residual: impl Fn(EdgeId) -> Rational,
) -> Option<(NodeId, EdgeId, Rational)> {
    for &e in graph.incident(u) {
        if tree.contains(e) {
            continue;
        }
        let v = graph.edge(e).other(u);
        let top = tree.lca(u, v);
        if top == u {
            continue;
        }
        let detour = residual(e) + &costs.joined[v] - &costs.joined[top] + &costs.shared[top];
        if detour < costs.shared[u] {
            return Some((v, e, &costs.shared[u] - detour));
        }
    }
    None
}

/// Cost Σ_{a∈T_u} (w_a − b_a)/n_a(T) of the player at `node`.
pub fn tree_player_cost(graph: &Graph, tree: &SpanningTree, subsidies: &SubsidyAssignment, node: NodeId) -> Rational {
    tree.path_to_root(node).fold(Rational::zero(), |acc, a| {
        acc + subsidies.residual(graph, a) / Rational::from_integer(BigInt::from(tree.usage(a)))
    })
}

/// A tolerance check outcome for floating subsidies.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatVerdict {
    pub ok: bool,
    /// Largest amount by which a detour undercuts the current cost (≤ 0 when stable).
    pub worst_gain: f64,
    pub witness: Option<(NodeId, EdgeId)>,
}

/// Broadcast check with float subsidies `b[edge]`; detours must beat the current cost by more than `eps`.
pub fn is_equilibrium_broadcast_f64(game: &BroadcastGame, tree: &SpanningTree, b: &[f64], eps: f64) -> FloatVerdict {
    let graph = game.graph();
    let n = graph.node_count();
    let w: Vec<f64> = graph.edges().iter().map(|e| crate::rational::to_f64(&e.weight)).collect();
    let residual = |e: EdgeId| w[e] - b.get(e).copied().unwrap_or(0.0);
    let mut shared = vec![0.0; n];
    let mut joined = vec![0.0; n];
    for &v in tree.bfs_order() {
        if let (Some(e), Some(p)) = (tree.parent_edge(v), tree.parent(v)) {
            let k = tree.usage(e) as f64;
            shared[v] = shared[p] + residual(e) / k;
            joined[v] = joined[p] + residual(e) / (k + 1.0);
        }
    }
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for u in game.players() {
        for &e in graph.incident(u) {
            if tree.contains(e) {
                continue;
            }
            let v = graph.edge(e).other(u);
            let top = tree.lca(u, v);
            if top == u {
                continue;
            }
            let detour = residual(e) + joined[v] - joined[top] + shared[top];
            let gain = shared[u] - detour;
            if gain > worst {
                worst = gain;
                if gain > eps {
                    witness.get_or_insert((u, e));
                }
            }
        }
    }
    FloatVerdict {
        ok: witness.is_none(),
        worst_gain: if worst.is_finite() { worst } else { 0.0 },
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    // r - v1 - v2 - v3 - r, tree omits (v3, r)
    fn cycle3() -> (BroadcastGame, SpanningTree) {
        let mut g = Graph::new();
        for l in ["r", "v1", "v2", "v3"] {
            g.add_node(l).unwrap();
        }
        for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            g.add_edge(u, v, int(1)).unwrap();
        }
        let game = BroadcastGame::new(g, 0).unwrap();
        let tree = SpanningTree::new(game.graph(), 0, [0, 1, 2]).unwrap();
        (game, tree)
    }

    #[test]
    fn cycle_violation_and_fix() {
        let (game, tree) = cycle3();
        let v = is_equilibrium_broadcast(&game, &tree, &SubsidyAssignment::zero());
        assert_eq!(
            v,
            Verdict::Violation {
                player: 2,
                path: vec![3],
                gain: ratio(5, 6)
            }
        );
        let general = game.to_general();
        let state = State::from_tree(game.graph(), &tree, game.players());
        assert_eq!(is_equilibrium_general(&general, &state, &SubsidyAssignment::zero()), v);
        let b = SubsidyAssignment::new([(2, ratio(5, 6))], false);
        assert!(is_equilibrium_broadcast(&game, &tree, &b).is_ok());
        assert!(is_equilibrium_general(&general, &state, &b).is_ok());
        assert_eq!(tree_player_cost(game.graph(), &tree, &b, 3), int(1));
    }

    #[test]
    fn verdict_json() {
        let (game, tree) = cycle3();
        let game_any = Game::Broadcast(game.clone());
        let v = is_equilibrium_broadcast(&game, &tree, &SubsidyAssignment::zero());
        assert_eq!(v.to_json(&game_any), "{\"ok\":false,\"player\":\"v3\",\"gain\":\"5/6\",\"path\":[3]}\n");
        assert_eq!(Verdict::Ok.to_json(&game_any), "{\"ok\":true}\n");
    }

    #[test]
    fn float_check_uses_slack() {
        let (game, tree) = cycle3();
        let mut b = vec![0.0; 4];
        b[2] = 5.0 / 6.0 - 1e-12;
        assert!(is_equilibrium_broadcast_f64(&game, &tree, &b, 1e-9).ok);
        b[2] = 0.8;
        assert!(!is_equilibrium_broadcast_f64(&game, &tree, &b, 1e-9).ok);
    }
}
