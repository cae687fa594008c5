use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::graph::{EdgeId, Graph};
use super::ModelError;
use crate::rational::Rational;

/// Per-edge subsidies b_a. Edges absent from the map carry zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubsidyAssignment {
    values: BTreeMap<EdgeId, Rational>,
    integral: bool,
}

impl SubsidyAssignment {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(values: impl IntoIterator<Item = (EdgeId, Rational)>, integral: bool) -> Self {
        let values = values.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        SubsidyAssignment { values, integral }
    }

    /// All-or-nothing assignment that fully pays each listed edge.
    pub fn full(graph: &Graph, edges: impl IntoIterator<Item = EdgeId>) -> Self {
        Self::new(edges.into_iter().map(|e| (e, graph.weight(e).clone())), true)
    }

    pub fn get(&self, edge: EdgeId) -> Rational {
        self.values.get(&edge).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn get_ref(&self, edge: EdgeId) -> Option<&Rational> {
        self.values.get(&edge)
    }

    pub fn set(&mut self, edge: EdgeId, value: Rational) {
        if value.is_zero() {
            self.values.remove(&edge);
        } else {
            self.values.insert(edge, value);
        }
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, &Rational)> {
        self.values.iter().map(|(&e, v)| (e, v))
    }

    pub fn support(&self) -> Vec<EdgeId> {
        self.values.keys().copied().collect()
    }

    pub fn total(&self) -> Rational {
        self.values.values().fold(Rational::zero(), |acc, v| acc + v)
    }

    /// w_a − b_a.
    pub fn residual(&self, graph: &Graph, edge: EdgeId) -> Rational {
        match self.values.get(&edge) {
            Some(b) => graph.weight(edge) - b,
            None => graph.weight(edge).clone(),
        }
    }

    /// Checks 0 ≤ b_a ≤ w_a, and b_a ∈ {0, w_a} when integral.
    pub fn validate(&self, graph: &Graph) -> Result<(), ModelError> {
        for (&edge, b) in &self.values {
            if edge >= graph.edge_count() {
                return Err(ModelError::UnknownEdge(edge));
            }
            let w = graph.weight(edge);
            let bad = |reason: &str| ModelError::InvalidSubsidy {
                edge,
                reason: reason.to_string(),
            };
            if b.is_negative() {
                return Err(bad("negative"));
            }
            if b > w {
                return Err(bad("exceeds edge weight"));
            }
            if self.integral && b != w {
                return Err(bad("all-or-nothing subsidy must be 0 or the full weight"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn validation() {
        let mut g = Graph::new();
        g.add_node("a").unwrap();
        g.add_node("b").unwrap();
        g.add_edge(0, 1, int(1)).unwrap();
        assert!(SubsidyAssignment::new([(0, ratio(1, 2))], false).validate(&g).is_ok());
        assert!(SubsidyAssignment::new([(0, ratio(1, 2))], true).validate(&g).is_err());
        assert!(SubsidyAssignment::new([(0, int(2))], false).validate(&g).is_err());
        assert!(SubsidyAssignment::new([(0, int(-1))], false).validate(&g).is_err());
        assert!(SubsidyAssignment::new([(3, int(1))], false).validate(&g).is_err());
        let full = SubsidyAssignment::full(&g, [0]);
        assert!(full.validate(&g).is_ok());
        assert_eq!(full.residual(&g, 0), int(0));
        assert_eq!(SubsidyAssignment::new([(0, int(0))], false).support(), Vec::<usize>::new());
    }
}
