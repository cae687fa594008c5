use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::EnforceError;
use crate::game::is_equilibrium_broadcast;
use crate::model::{BroadcastGame, EdgeId, SpanningTree, SubsidyAssignment};
use crate::rational::{common_denominator, scale_to_integer, Rational};

pub const DEFAULT_CAP: usize = 24;

/// Tree-local equilibrium rows restricted to all-or-nothing choices on a
/// candidate set, cleared to integers. Row k holds iff
/// `constant[k] + Σ_{x_j = 1} coeffs[k][j] ≤ 0`.
#[derive(Debug, Clone)]
pub struct CompiledEnforcement {
    candidates: Vec<EdgeId>,
    constant: Vec<BigInt>,
    coeffs: Vec<Vec<BigInt>>,
    cost: Vec<BigInt>,
}

impl CompiledEnforcement {
    pub fn new(game: &BroadcastGame, tree: &SpanningTree, candidates: &[EdgeId]) -> Self {
        let graph = game.graph();
        let mut candidates = candidates.to_vec();
        candidates.sort_unstable();
        candidates.dedup();
        let slot = |e: EdgeId| candidates.binary_search(&e).ok();
        let q = |n: u64| Rational::from_integer(BigInt::from(n));
        let mut constant = Vec::new();
        let mut coeffs = Vec::new();
        for u in game.players() {
            for &e in graph.incident(u) {
                if tree.contains(e) {
                    continue;
                }
                let v = graph.edge(e).other(u);
                if tree.lca(u, v) == u {
                    continue;
                }
                // Σ_{T_u}(w−b)/n − (w_e − b_e) − Σ_{T_v}(w−b)/d ≤ 0 with b_a = w_a·x_a.
                let own: Vec<EdgeId> = tree.path_to_root(u).collect();
                let mut k = -graph.weight(e).clone();
                let mut row = vec![Rational::zero(); candidates.len()];
                if let Some(j) = slot(e) {
                    row[j] += graph.weight(e);
                }
                for &a in &own {
                    let share = graph.weight(a) / q(tree.usage(a));
                    k += &share;
                    if let Some(j) = slot(a) {
                        row[j] -= share;
                    }
                }
                for a in tree.path_to_root(v) {
                    let d = if own.contains(&a) { tree.usage(a) } else { tree.usage(a) + 1 };
                    let share = graph.weight(a) / q(d);
                    k -= &share;
                    if let Some(j) = slot(a) {
                        row[j] += share;
                    }
                }
                let scale = common_denominator(row.iter().chain(std::iter::once(&k)));
                constant.push(scale_to_integer(&k, &scale));
                coeffs.push(row.iter().map(|r| scale_to_integer(r, &scale)).collect());
            }
        }
        let weights: Vec<Rational> = candidates.iter().map(|&e| graph.weight(e).clone()).collect();
        let scale = common_denominator(&weights);
        let cost = weights.iter().map(|w| scale_to_integer(w, &scale)).collect();
        CompiledEnforcement {
            candidates,
            constant,
            coeffs,
            cost,
        }
    }

    pub fn candidates(&self) -> &[EdgeId] {
        &self.candidates
    }

    pub fn row_count(&self) -> usize {
        self.constant.len()
    }

    /// Bit j of `mask` subsidizes `candidates()[j]` in full.
    pub fn enforces(&self, mask: u64) -> bool {
        self.constant.iter().zip(&self.coeffs).all(|(k, row)| {
            let mut s = k.clone();
            for (j, c) in row.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    s += c;
                }
            }
            !s.is_positive()
        })
    }

    pub fn edges_of(&self, mask: u64) -> Vec<EdgeId> {
        (0..self.candidates.len())
            .filter(|&j| mask >> j & 1 == 1)
            .map(|j| self.candidates[j])
            .collect()
    }

    /// Gray-code walk over the low `bits` with the remaining bits fixed by `high`.
    fn scan(&self, high: u64, bits: usize, mut visit: impl FnMut(u64, &BigInt)) {
        let mut sums: Vec<BigInt> = self
            .constant
            .iter()
            .zip(&self.coeffs)
            .map(|(k, row)| {
                let mut s = k.clone();
                for (j, c) in row.iter().enumerate() {
                    if high >> j & 1 == 1 {
                        s += c;
                    }
                }
                s
            })
            .collect();
        let mut cost: BigInt = (0..self.cost.len())
            .filter(|&j| high >> j & 1 == 1)
            .map(|j| &self.cost[j])
            .sum();
        let mut mask = high;
        let check = |sums: &[BigInt]| sums.iter().all(|s| !s.is_positive());
        if check(&sums) {
            visit(mask, &cost);
        }
        for step in 1u64..(1u64 << bits) {
            let j = step.trailing_zeros() as usize;
            mask ^= 1 << j;
            let on = mask >> j & 1 == 1;
            for (s, row) in sums.iter_mut().zip(&self.coeffs) {
                if on {
                    *s += &row[j];
                } else {
                    *s -= &row[j];
                }
            }
            if on {
                cost += &self.cost[j];
            } else {
                cost -= &self.cost[j];
            }
            if check(&sums) {
                visit(mask, &cost);
            }
        }
    }

    /// Every enforcing mask, ascending.
    pub fn enforcing_masks(&self) -> Vec<u64> {
        let mut out = Vec::new();
        self.scan(0, self.candidates.len(), |m, _| out.push(m));
        out.sort_unstable();
        out
    }

    /// Cheapest enforcing mask; ties go to the lexicographically smallest edge set.
    pub fn cheapest(&self) -> Option<u64> {
        let c = self.candidates.len();
        let split = c.min(6);
        let low = c - split;
        let best = (0u64..(1 << split))
            .into_par_iter()
            .filter_map(|top| {
                let mut best: Option<(BigInt, Vec<EdgeId>, u64)> = None;
                self.scan(top << low, low, |mask, cost| {
                    let better = match &best {
                        None => true,
                        Some((bc, bset, _)) => {
                            cost < bc || (cost == bc && self.edges_of(mask) < *bset)
                        }
                    };
                    if better {
                        best = Some((cost.clone(), self.edges_of(mask), mask));
                    }
                });
                best
            })
            .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        best.map(|(_, _, mask)| mask)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AonSolution {
    pub subsidies: SubsidyAssignment,
    pub total: Rational,
    pub edges: Vec<EdgeId>,
}

/// Exhaustive all-or-nothing search; `candidates` defaults to the positive-weight tree edges.
pub fn min_integral_subsidy_exact(
    game: &BroadcastGame,
    tree: &SpanningTree,
    candidates: Option<&[EdgeId]>,
    cap: usize,
) -> Result<Option<AonSolution>, EnforceError> {
    let graph = game.graph();
    let default: Vec<EdgeId>;
    let candidates = match candidates {
        Some(c) => c,
        None => {
            default = tree.edges().iter().copied().filter(|&e| !graph.weight(e).is_zero()).collect();
            &default
        }
    };
    if candidates.len() > cap || candidates.len() > 63 {
        return Err(EnforceError::CapExceeded {
            size: candidates.len(),
            cap,
        });
    }
    let compiled = CompiledEnforcement::new(game, tree, candidates);
    let Some(mask) = compiled.cheapest() else {
        return Ok(None);
    };
    let edges = compiled.edges_of(mask);
    let subsidies = SubsidyAssignment::full(graph, edges.iter().copied());
    assert!(
        is_equilibrium_broadcast(game, tree, &subsidies).is_ok(),
        "compiled rows disagree with the exact check"
    );
    let total = subsidies.total();
    Ok(Some(AonSolution { subsidies, total, edges }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Graph;
    use crate::rational::int;

    #[test]
    fn unit_cycle_needs_one_edge() {
        let mut g = Graph::new();
        for l in ["r", "v1", "v2", "v3"] {
            g.add_node(l).unwrap();
        }
        for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            g.add_edge(u, v, int(1)).unwrap();
        }
        let game = BroadcastGame::new(g, 0).unwrap();
        let tree = SpanningTree::new(game.graph(), 0, [0, 1, 2]).unwrap();
        let s = min_integral_subsidy_exact(&game, &tree, None, DEFAULT_CAP).unwrap().unwrap();
        assert_eq!(s.total, int(1));
        assert_eq!(s.edges, vec![2]);
        let compiled = CompiledEnforcement::new(&game, &tree, tree.edges());
        for mask in 0..8 {
            let b = SubsidyAssignment::full(game.graph(), compiled.edges_of(mask));
            assert_eq!(compiled.enforces(mask), is_equilibrium_broadcast(&game, &tree, &b).is_ok());
        }
        assert!(matches!(
            min_integral_subsidy_exact(&game, &tree, None, 2),
            Err(EnforceError::CapExceeded { size: 3, cap: 2 })
        ));
    }
}
