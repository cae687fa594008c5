use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;

use crate::model::{EdgeId, GeneralGame, Graph, NodeId, State, SubsidyAssignment};
use crate::rational::Rational;

/// w'_a = (w_a − b_a)/(n_a(T) + 1 − n^i_a(T)) for every edge.
pub fn reduced_weights(
    graph: &Graph,
    state: &State,
    subsidies: &SubsidyAssignment,
    player: usize,
) -> Vec<Rational> {
    (0..graph.edge_count())
        .map(|a| {
            let others = state.usage(a) - u64::from(state.uses(player, a));
            subsidies.residual(graph, a) / Rational::from_integer(BigInt::from(others + 1))
        })
        .collect()
}

/// Shortest `s`→`t` path under `weights`, smallest edge-id sequence among ties.
pub fn shortest_path(graph: &Graph, weights: &[Rational], s: NodeId, t: NodeId) -> Option<(Vec<EdgeId>, Rational)> {
    let n = graph.node_count();
    let mut best: Vec<Option<(Rational, Vec<EdgeId>)>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    best[s] = Some((Rational::from_integer(0.into()), Vec::new()));
    heap.push(Reverse((Rational::from_integer(0.into()), Vec::<EdgeId>::new(), s)));
    while let Some(Reverse((dist, path, x))) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        if x == t {
            return Some((path, dist));
        }
        // Dead ends cannot lie inside a simple s-t path.
        if x != s && graph.degree(x) == 1 {
            continue;
        }
        for &e in graph.incident(x) {
            let y = graph.edge(e).other(x);
            if done[y] {
                continue;
            }
            let nd = &dist + &weights[e];
            let better = match &best[y] {
                None => true,
                Some((d, p)) => nd < *d || (nd == *d && lex_less_extended(&path, e, p)),
            };
            if better {
                let mut np = path.clone();
                np.push(e);
                best[y] = Some((nd.clone(), np.clone()));
                heap.push(Reverse((nd, np, y)));
            }
        }
    }
    None
}

fn lex_less_extended(prefix: &[EdgeId], last: EdgeId, other: &[EdgeId]) -> bool {
    prefix.iter().copied().chain(std::iter::once(last)).lt(other.iter().copied())
}

/// Best response of `player` against the rest of `state`, with its exact cost.
pub fn best_response(
    game: &GeneralGame,
    state: &State,
    subsidies: &SubsidyAssignment,
    player: usize,
) -> (Vec<EdgeId>, Rational) {
    let weights = reduced_weights(game.graph(), state, subsidies, player);
    let (s, t) = game.pairs()[player];
    shortest_path(game.graph(), &weights, s, t).expect("game graphs are connected")
}
