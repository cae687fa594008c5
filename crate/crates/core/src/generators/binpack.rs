use super::bypass::attach_gadget;
use super::GenError;
use crate::game::harmonic;
use crate::model::{BroadcastGame, EdgeId, Graph, NodeId, SpanningTree};
use crate::rational::{int, Rational};

/// Bin-packing graph: one bypass gadget of capacity C per bin, one star per
/// item, and every item center joined to every connector.
#[derive(Debug, Clone)]
pub struct BinPackInstance {
    pub game: BroadcastGame,
    pub sizes: Vec<u64>,
    pub bins: usize,
    pub capacity: u64,
    pub ell: u64,
    pub connectors: Vec<NodeId>,
    pub centers: Vec<NodeId>,
    /// (item, bin) → edge id of the center–connector edge.
    pub links: Vec<Vec<EdgeId>>,
    /// Basic paths and star leaves; in every assignment tree.
    pub fixed: Vec<EdgeId>,
    /// kℓ + 2n(H_{C+ℓ} − H_C)
    pub k_weight: Rational,
}

impl BinPackInstance {
    /// Spanning tree hooking item i under connector `assignment[i]`.
    pub fn tree_for(&self, assignment: &[usize]) -> Result<SpanningTree, GenError> {
        if assignment.len() != self.sizes.len() {
            return Err(GenError::Parameter(format!(
                "assignment has {} entries for {} items",
                assignment.len(),
                self.sizes.len()
            )));
        }
        let mut edges = self.fixed.clone();
        for (item, &bin) in assignment.iter().enumerate() {
            if bin >= self.bins {
                return Err(GenError::BadAssignment {
                    item,
                    bin,
                    bins: self.bins,
                });
            }
            edges.push(self.links[item][bin]);
        }
        Ok(SpanningTree::new(self.game.graph(), self.game.root(), edges)?)
    }

    /// Bin loads under an assignment.
    pub fn loads(&self, assignment: &[usize]) -> Vec<u64> {
        let mut load = vec![0; self.bins];
        for (item, &bin) in assignment.iter().enumerate() {
            load[bin] += self.sizes[item];
        }
        load
    }

    /// All k^n assignments in lexicographic order.
    pub fn assignments(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let n = self.sizes.len();
        let total = (self.bins as u64).pow(n as u32);
        (0..total).map(move |mut code| {
            let mut a = vec![0; n];
            for slot in a.iter_mut().rev() {
                *slot = (code % self.bins as u64) as usize;
                code /= self.bins as u64;
            }
            a
        })
    }
}

pub fn gen_binpack(sizes: &[u64], bins: usize, capacity: u64) -> Result<BinPackInstance, GenError> {
    let mut problems = Vec::new();
    if sizes.is_empty() {
        problems.push("no items".to_string());
    }
    if bins == 0 {
        problems.push("need at least one bin".to_string());
    }
    for (i, &s) in sizes.iter().enumerate() {
        if s == 0 || s % 2 == 1 {
            problems.push(format!("item {i} has size {s}, expected a positive even number"));
        }
        if s > capacity {
            problems.push(format!("item {i} has size {s} above capacity {capacity}"));
        }
    }
    if capacity == 0 || capacity % 2 == 1 {
        problems.push(format!("capacity {capacity} is not a positive even number"));
    }
    let sum: u64 = sizes.iter().sum();
    if sum != bins as u64 * capacity {
        problems.push(format!("sizes sum to {sum}, expected {bins}·{capacity}"));
    }
    if !problems.is_empty() {
        return Err(GenError::BinPacking(problems));
    }

    let mut g = Graph::new();
    let r = g.add_node("r")?;
    let mut fixed = Vec::new();
    let mut connectors = Vec::with_capacity(bins);
    let mut ell = 0;
    let mut bypass_weight = Rational::from_integer(0.into());
    for j in 0..bins {
        let (c, path, _, l, w) = attach_gadget(&mut g, r, capacity, &format!("b{}:", j + 1))?;
        fixed.extend(path);
        connectors.push(c);
        ell = l;
        bypass_weight = w;
    }
    let mut centers = Vec::with_capacity(sizes.len());
    for (i, &s) in sizes.iter().enumerate() {
        let x = g.add_node(format!("x{}", i + 1))?;
        for k in 1..s {
            let leaf = g.add_node(format!("x{}:{}", i + 1, k))?;
            fixed.push(g.add_edge(x, leaf, int(0))?);
        }
        centers.push(x);
    }
    let link_weight = int(2) * &bypass_weight;
    let mut links = Vec::with_capacity(sizes.len());
    for &x in &centers {
        let row = connectors
            .iter()
            .map(|&c| g.add_edge(x, c, link_weight.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        links.push(row);
    }
    let k_weight = int((bins as u64 * ell) as i64) + int(sizes.len() as i64) * &link_weight;
    debug_assert_eq!(bypass_weight, harmonic(capacity + ell) - harmonic(capacity));
    Ok(BinPackInstance {
        game: BroadcastGame::new(g, r)?,
        sizes: sizes.to_vec(),
        bins,
        capacity,
        ell,
        connectors,
        centers,
        links,
        fixed,
        k_weight,
    })
}
