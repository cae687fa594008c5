use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::cost::{path_share, rosenthal_potential};
use super::response::best_response;
use crate::model::{GeneralGame, State, SubsidyAssignment};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderPolicy {
    RoundRobin,
    /// A fresh permutation of the players every round, drawn from ChaCha8 with this seed.
    Shuffled { seed: u64 },
}

#[derive(Debug, Clone)]
pub struct DynamicsOutcome {
    pub state: State,
    pub rounds: usize,
    pub moves: usize,
    /// Φ before the first move and after every move.
    pub potential: Vec<Rational>,
}

#[derive(Debug, Error)]
#[error("no equilibrium reached after {rounds} rounds")]
pub struct MaxRoundsExceeded {
    pub rounds: usize,
    pub last: Box<DynamicsOutcome>,
}

/// Strictly improving best-response moves until a full round changes nothing.
pub fn best_response_dynamics(
    game: &GeneralGame,
    initial: State,
    subsidies: &SubsidyAssignment,
    policy: OrderPolicy,
    max_rounds: usize,
) -> Result<DynamicsOutcome, MaxRoundsExceeded> {
    let graph = game.graph();
    let mut state = initial;
    let mut trace = vec![rosenthal_potential(graph, &state, subsidies)];
    let mut moves = 0;
    let mut order: Vec<usize> = (0..game.player_count()).collect();
    let mut rng = match policy {
        OrderPolicy::Shuffled { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        OrderPolicy::RoundRobin => None,
    };
    for round in 1..=max_rounds {
        if let Some(rng) = rng.as_mut() {
            order.shuffle(rng);
        }
        let mut moved = false;
        for &i in &order {
            let current = path_share(graph, &state, subsidies, state.path(i));
            let (path, cost) = best_response(game, &state, subsidies, i);
            if cost < current {
                state = state.with_path(i, path);
                trace.push(rosenthal_potential(graph, &state, subsidies));
                moves += 1;
                moved = true;
            }
        }
        if !moved {
            return Ok(DynamicsOutcome {
                state,
                rounds: round,
                moves,
                potential: trace,
            });
        }
    }
    Err(MaxRoundsExceeded {
        rounds: max_rounds,
        last: Box::new(DynamicsOutcome {
            state,
            rounds: max_rounds,
            moves,
            potential: trace,
        }),
    })
}
