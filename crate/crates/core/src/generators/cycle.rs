use super::GenError;
use crate::model::{BroadcastGame, SpanningTree};
use crate::rational::int;

#[derive(Debug, Clone)]
pub struct CycleInstance {
    pub game: BroadcastGame,
    pub tree: SpanningTree,
}

/// Unit cycle r, v_1, …, v_n, r. Edge i joins v_i and v_{i+1} (v_0 = v_{n+1} = r);
/// the designated tree drops edge n = (v_n, r).
pub fn gen_cycle(n: usize) -> Result<CycleInstance, GenError> {
    if n < 2 {
        return Err(GenError::Parameter(format!("cycle needs n >= 2, got {n}")));
    }
    let mut g = crate::model::Graph::with_capacity(n + 1, n + 1);
    g.add_node("r")?;
    for i in 1..=n {
        g.add_node(format!("v{i}"))?;
    }
    for i in 0..n {
        g.add_edge(i, i + 1, int(1))?;
    }
    g.add_edge(n, 0, int(1))?;
    let game = BroadcastGame::new(g, 0)?;
    let tree = SpanningTree::new(game.graph(), 0, 0..n)?;
    Ok(CycleInstance { game, tree })
}
