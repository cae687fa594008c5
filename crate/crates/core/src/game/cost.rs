use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::model::{GeneralGame, Graph, ModelError, State, SubsidyAssignment};
use crate::rational::Rational;

/// H_n = 1 + 1/2 + … + 1/n, with H_0 = 0.
pub fn harmonic(n: u64) -> Rational {
    let mut total = Rational::zero();
    for k in 1..=n {
        total += Rational::new(BigInt::one(), BigInt::from(k));
    }
    total
}

/// H_0..=H_n.
pub fn harmonic_table(n: u64) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = Rational::zero();
    out.push(acc.clone());
    for k in 1..=n {
        acc += Rational::new(BigInt::one(), BigInt::from(k));
        out.push(acc.clone());
    }
    out
}

/// co_i(T;b) = Σ_{a ∈ T_i} (w_a − b_a)/n_a(T).
pub fn player_cost(
    game: &GeneralGame,
    state: &State,
    subsidies: &SubsidyAssignment,
    player: usize,
) -> Result<Rational, ModelError> {
    if player >= state.player_count() || player >= game.player_count() {
        return Err(ModelError::UnknownPlayer(player));
    }
    Ok(path_share(game.graph(), state, subsidies, state.path(player)))
}

pub(crate) fn path_share(graph: &Graph, state: &State, b: &SubsidyAssignment, path: &[usize]) -> Rational {
    let mut total = Rational::zero();
    for &a in path {
        total += b.residual(graph, a) / Rational::from_integer(BigInt::from(state.usage(a)));
    }
    total
}

/// Φ(T;b) = Σ_a (w_a − b_a)·H_{n_a(T)}.
pub fn rosenthal_potential(graph: &Graph, state: &State, subsidies: &SubsidyAssignment) -> Rational {
    let max = state.usage_counts().iter().copied().max().unwrap_or(0);
    let h = harmonic_table(max);
    let mut total = Rational::zero();
    for (a, &n) in state.usage_counts().iter().enumerate() {
        if n > 0 {
            total += subsidies.residual(graph, a) * &h[n as usize];
        }
    }
    total
}
