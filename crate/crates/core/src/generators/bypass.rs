use super::GenError;
use crate::game::harmonic;
use crate::model::{BroadcastGame, EdgeId, Graph, NodeId, SpanningTree};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BypassSpec {
    pub kappa: u64,
    pub ell: u64,
    pub connector: NodeId,
    pub bypass_edge: EdgeId,
    pub bypass_weight: Rational,
}

#[derive(Debug, Clone)]
pub struct BypassInstance {
    pub game: BroadcastGame,
    pub tree: SpanningTree,
    pub spec: BypassSpec,
}

/// Smallest ℓ ≥ 1 with H_{κ+ℓ} − H_κ > 1.
pub fn bypass_length(kappa: u64) -> u64 {
    let one = int(1);
    let mut sum = Rational::from_integer(0.into());
    let mut ell = 0;
    while sum <= one {
        ell += 1;
        sum += Rational::new(1.into(), (kappa + ell).into());
    }
    ell
}

/// Appends a gadget of capacity κ hanging off `root`: a unit path of ℓ
/// nodes ending at the connector, and the bypass edge back to the root.
/// Returns (connector, path edge ids root-outward, bypass edge id, ℓ, weight).
pub(crate) fn attach_gadget(
    g: &mut Graph,
    root: NodeId,
    kappa: u64,
    prefix: &str,
) -> Result<(NodeId, Vec<EdgeId>, EdgeId, u64, Rational), GenError> {
    let ell = bypass_length(kappa);
    let weight = harmonic(kappa + ell) - harmonic(kappa);
    let mut path = Vec::with_capacity(ell as usize);
    let mut prev = root;
    for i in 1..=ell {
        let v = g.add_node(format!("{prefix}p{i}"))?;
        path.push(g.add_edge(prev, v, int(1))?);
        prev = v;
    }
    let bypass = g.add_edge(prev, root, weight.clone())?;
    Ok((prev, path, bypass, ell, weight))
}

/// Gadget of capacity κ with β zero-weight leaves on the connector.
pub fn gen_bypass(kappa: u64, beta: u64) -> Result<BypassInstance, GenError> {
    if kappa < 1 {
        return Err(GenError::Parameter("capacity must be at least 1".into()));
    }
    let mut g = Graph::new();
    let r = g.add_node("r")?;
    let (connector, mut edges, bypass_edge, ell, bypass_weight) = attach_gadget(&mut g, r, kappa, "")?;
    for i in 1..=beta {
        let s = g.add_node(format!("s{i}"))?;
        edges.push(g.add_edge(connector, s, int(0))?);
    }
    let game = BroadcastGame::new(g, r)?;
    let tree = SpanningTree::new(game.graph(), r, edges)?;
    Ok(BypassInstance {
        game,
        tree,
        spec: BypassSpec {
            kappa,
            ell,
            connector,
            bypass_edge,
            bypass_weight,
        },
    })
}
