//! Minimum fractional subsidies that make a target state an equilibrium.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::game::{best_response, is_equilibrium_broadcast, is_equilibrium_general};
use crate::model::{BroadcastGame, EdgeId, Game, GeneralGame, ModelError, SpanningTree, State, SubsidyAssignment};
use crate::rational::Rational;
use crate::simplex::{solve, Bound, LinearProgram, LpError, LpOutcome, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Lp3,
    Lp2,
    Rowgen,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lp3" => Ok(Method::Lp3),
            "lp2" => Ok(Method::Lp2),
            "rowgen" => Ok(Method::Rowgen),
            other => Err(format!("unknown method {other:?} (expected lp3, lp2 or rowgen)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SneSolution {
    pub subsidies: SubsidyAssignment,
    pub total: Rational,
    /// Solver rounds: 1 for the closed formulations, oracle passes for row generation.
    pub rounds: usize,
}

#[derive(Debug, Error)]
pub enum SneError {
    #[error("the lp3 formulation needs a broadcast game and a spanning tree target")]
    NotBroadcastTree,
    #[error("row generation hit its cap of {cap} rounds")]
    RowgenCap { cap: usize, partial: Box<SneSolution> },
    #[error("subsidy LP unexpectedly {0}")]
    Solver(&'static str),
    #[error("computed subsidies fail the equilibrium check")]
    Unverified,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// An LP whose first `edges.len()` variables are subsidies b_a on `edges`.
#[derive(Debug, Clone)]
pub struct SubsidyLp {
    pub lp: LinearProgram,
    pub edges: Vec<EdgeId>,
}

fn q(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn subsidy_program(graph: &crate::model::Graph, edges: &[EdgeId], extra: usize) -> LinearProgram {
    let mut lp = LinearProgram::new(edges.len() + extra);
    for (j, &e) in edges.iter().enumerate() {
        lp.objective[j] = q(1);
        lp.bounds[j] = Bound::between(Rational::zero(), graph.weight(e).clone());
    }
    lp
}

/// One row per player node `u` and incident non-tree edge (u, v).
pub fn build_lp_broadcast(game: &BroadcastGame, tree: &SpanningTree) -> SubsidyLp {
    let graph = game.graph();
    let edges = tree.edges().to_vec();
    let var = |e: EdgeId| edges.binary_search(&e).expect("tree edge");
    let mut lp = subsidy_program(graph, &edges, 0);
    for u in game.players() {
        for &e in graph.incident(u) {
            if tree.contains(e) {
                continue;
            }
            let v = graph.edge(e).other(u);
            let own: Vec<EdgeId> = tree.path_to_root(u).collect();
            // Σ_{T_u} (w−b)/n ≤ w_e + Σ_{T_v} (w−b)/d, with d = n + 1 − [a ∈ T_u].
            let mut terms = Vec::new();
            let mut rhs = graph.weight(e).clone();
            for &a in &own {
                let share = q(tree.usage(a));
                terms.push((var(a), -(q(1) / &share)));
                rhs -= graph.weight(a) / share;
            }
            for a in tree.path_to_root(v) {
                let d = if own.contains(&a) { q(tree.usage(a)) } else { q(tree.usage(a) + 1) };
                terms.push((var(a), q(1) / &d));
                rhs += graph.weight(a) / d;
            }
            lp.add_sparse_row(terms, Relation::Le, rhs);
        }
    }
    SubsidyLp { lp, edges }
}

/// Potentials π_i(v) replace the path constraints: π_i(y) ≤ π_i(x) + w'_a on every arc.
pub fn build_lp_general(game: &GeneralGame, state: &State) -> SubsidyLp {
    let graph = game.graph();
    let edges = state.established();
    let nv = graph.node_count();
    let players = game.player_count();
    let base = edges.len();
    let pi = |i: usize, v: usize| base + i * nv + v;
    let mut lp = subsidy_program(graph, &edges, players * nv);
    for (i, &(s, t)) in game.pairs().iter().enumerate() {
        lp.bounds[pi(i, s)] = Bound::between(Rational::zero(), Rational::zero());
        for a in graph.edges() {
            let d = q(state.usage(a.id) + 1 - u64::from(state.uses(i, a.id)));
            let var = edges.binary_search(&a.id).ok();
            for (x, y) in [(a.u, a.v), (a.v, a.u)] {
                let mut terms = vec![(pi(i, y), q(1)), (pi(i, x), -q(1))];
                if let Some(j) = var {
                    terms.push((j, q(1) / &d));
                }
                lp.add_sparse_row(terms, Relation::Le, graph.weight(a.id) / &d);
            }
        }
        // π_i(t_i) ≥ Σ_{T_i} (w−b)/n
        let mut terms = vec![(pi(i, t), q(1))];
        let mut rhs = Rational::zero();
        for &a in state.path(i) {
            let n = q(state.usage(a));
            let j = edges.binary_search(&a).expect("established");
            terms.push((j, q(1) / &n));
            rhs += graph.weight(a) / n;
        }
        lp.add_sparse_row(terms, Relation::Ge, rhs);
    }
    SubsidyLp { lp, edges }
}

fn optimum(program: &SubsidyLp, integral: bool) -> Result<(SubsidyAssignment, Rational), SneError> {
    match solve(&program.lp)? {
        LpOutcome::Optimal { x, .. } => {
            let b = SubsidyAssignment::new(program.edges.iter().copied().zip(x), integral);
            let total = b.total();
            Ok((b, total))
        }
        LpOutcome::Infeasible => Err(SneError::Solver("infeasible")),
        LpOutcome::Unbounded => Err(SneError::Solver("unbounded")),
    }
}

/// Adds violated path constraints found by per-player best responses until none remain.
pub fn solve_sne_rowgen(game: &GeneralGame, state: &State) -> Result<SneSolution, SneError> {
    let graph = game.graph();
    let edges = state.established();
    let mut program = SubsidyLp {
        lp: subsidy_program(graph, &edges, 0),
        edges: edges.clone(),
    };
    let cap = (10 * game.player_count() * graph.edge_count()).max(1);
    let mut last = None;
    for round in 1..=cap {
        let (b, total) = optimum(&program, false)?;
        let cuts: Vec<_> = (0..game.player_count())
            .into_par_iter()
            .filter_map(|i| {
                let current = crate::game::player_cost(game, state, &b, i).expect("valid player");
                let (path, cost) = best_response(game, state, &b, i);
                (cost < current).then_some((i, path))
            })
            .collect();
        if cuts.is_empty() {
            return Ok(SneSolution {
                subsidies: b,
                total,
                rounds: round,
            });
        }
        for (i, path) in cuts {
            // Σ_{T_i} (w−b)/n ≤ Σ_{p} (w−b)/d
            let mut terms = Vec::new();
            let mut rhs = Rational::zero();
            for &a in state.path(i) {
                let n = q(state.usage(a));
                terms.push((edges.binary_search(&a).expect("established"), -(q(1) / &n)));
                rhs -= graph.weight(a) / n;
            }
            for &a in &path {
                let d = q(state.usage(a) + 1 - u64::from(state.uses(i, a)));
                if let Ok(j) = edges.binary_search(&a) {
                    terms.push((j, q(1) / &d));
                }
                rhs += graph.weight(a) / d;
            }
            program.lp.add_sparse_row(terms, Relation::Le, rhs);
        }
        last = Some(SneSolution {
            subsidies: b,
            total,
            rounds: round,
        });
    }
    Err(SneError::RowgenCap {
        cap,
        partial: Box::new(last.expect("at least one round")),
    })
}

pub fn solve_sne_lp2(game: &GeneralGame, state: &State) -> Result<SneSolution, SneError> {
    let (subsidies, total) = optimum(&build_lp_general(game, state), false)?;
    Ok(SneSolution {
        subsidies,
        total,
        rounds: 1,
    })
}

pub fn solve_sne_lp3(game: &BroadcastGame, tree: &SpanningTree) -> Result<SneSolution, SneError> {
    let (subsidies, total) = optimum(&build_lp_broadcast(game, tree), false)?;
    Ok(SneSolution {
        subsidies,
        total,
        rounds: 1,
    })
}

/// Minimum subsidies for a spanning-tree target of a broadcast game, verified.
pub fn min_subsidy_tree(game: &BroadcastGame, tree: &SpanningTree, method: Method) -> Result<SneSolution, SneError> {
    let solution = match method {
        Method::Lp3 => solve_sne_lp3(game, tree)?,
        Method::Lp2 | Method::Rowgen => {
            let general = game.to_general();
            let state = State::from_tree(game.graph(), tree, game.players());
            if method == Method::Lp2 {
                solve_sne_lp2(&general, &state)?
            } else {
                solve_sne_rowgen(&general, &state)?
            }
        }
    };
    if !is_equilibrium_broadcast(game, tree, &solution.subsidies).is_ok() {
        return Err(SneError::Unverified);
    }
    Ok(solution)
}

/// Minimum subsidies for an arbitrary target state, verified against best responses.
pub fn min_subsidy(game: &Game, state: &State, method: Method) -> Result<SneSolution, SneError> {
    let general = game.to_general();
    let solution = match method {
        Method::Lp3 => {
            let broadcast = game.as_broadcast().ok_or(SneError::NotBroadcastTree)?;
            let established = state.established();
            let tree = SpanningTree::new(game.graph(), broadcast.root(), established)
                .map_err(|_| SneError::NotBroadcastTree)?;
            if State::from_tree(game.graph(), &tree, broadcast.players()) != *state {
                return Err(SneError::NotBroadcastTree);
            }
            solve_sne_lp3(broadcast, &tree)?
        }
        Method::Lp2 => solve_sne_lp2(&general, state)?,
        Method::Rowgen => solve_sne_rowgen(&general, state)?,
    };
    if !is_equilibrium_general(&general, state, &solution.subsidies).is_ok() {
        return Err(SneError::Unverified);
    }
    Ok(solution)
}
