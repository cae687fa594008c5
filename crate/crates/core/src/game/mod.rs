//! Cost shares, the potential, best responses, equilibrium checks and dynamics.

mod cost;
mod dynamics;
mod equilibrium;
mod response;

pub use cost::{harmonic, harmonic_table, player_cost, rosenthal_potential};
pub use dynamics::{best_response_dynamics, DynamicsOutcome, MaxRoundsExceeded, OrderPolicy};
pub use equilibrium::{
    broadcast_check_among, is_equilibrium_broadcast, is_equilibrium_broadcast_f64, is_equilibrium_general, tree_player_cost,
    FloatVerdict, Verdict,
};
pub use response::{best_response, reduced_weights, shortest_path};
