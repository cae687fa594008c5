use num_bigint::BigInt;

use super::GenError;
use crate::model::{BroadcastGame, Graph, SpanningTree};
use crate::rational::{int, Rational};

/// Rational stand-in for e, within 1e-12.
pub fn e_hat() -> Rational {
    Rational::new(BigInt::from(2_718_281_828_459_045u64), BigInt::from(10u64).pow(15))
}

#[derive(Debug, Clone)]
pub struct AonPathInstance {
    pub game: BroadcastGame,
    pub tree: SpanningTree,
    /// x = 1/(n − n/ê + 1)
    pub x: Rational,
}

/// Path r, v_1, …, v_n with x-weighted edges except the unit last one, plus
/// shortcuts (r, v_{n−1}) of weight x and (r, v_n) of weight 1.
/// Edge ids: path edges 0..n−1 from the root outward, then n and n+1.
pub fn gen_aon_path(n: usize) -> Result<AonPathInstance, GenError> {
    if n < 3 {
        return Err(GenError::Parameter(format!("path family needs n >= 3, got {n}")));
    }
    let nq = Rational::from_integer(BigInt::from(n));
    let x = (&nq - &nq / e_hat() + int(1)).recip();
    let mut g = Graph::with_capacity(n + 1, n + 2);
    g.add_node("r")?;
    for i in 1..=n {
        g.add_node(format!("v{i}"))?;
    }
    for i in 0..n - 1 {
        g.add_edge(i, i + 1, x.clone())?;
    }
    g.add_edge(n - 1, n, int(1))?;
    g.add_edge(0, n - 1, x.clone())?;
    g.add_edge(0, n, int(1))?;
    let game = BroadcastGame::new(g, 0)?;
    let tree = SpanningTree::new(game.graph(), 0, 0..n)?;
    Ok(AonPathInstance { game, tree, x })
}
