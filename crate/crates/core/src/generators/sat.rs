//! 3SAT-4 gadget graph for all-or-nothing enforcement.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::dimacs::Formula;
use super::GenError;
use crate::game::broadcast_check_among;
use crate::model::{is_mst, BroadcastGame, EdgeId, Graph, NodeId, SpanningTree, SubsidyAssignment};
use crate::rational::{int, Rational};

/// Labels below this one make the graph too large to build.
pub const SMALLEST_LABEL: usize = 7;

pub fn default_k() -> Rational {
    int(1_000_000)
}

/// n_9 = 7 and n_j = 4·n_{j+1}².
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelConstants {
    values: Vec<BigInt>,
}

impl LabelConstants {
    pub fn new() -> Self {
        let mut values = vec![BigInt::from(0); 10];
        values[9] = BigInt::from(7);
        for j in (1..9).rev() {
            values[j] = BigInt::from(4) * &values[j + 1] * &values[j + 1];
        }
        LabelConstants { values }
    }

    /// n_j for j in 1..=9.
    pub fn get(&self, j: usize) -> &BigInt {
        assert!((1..=9).contains(&j), "label {j} out of range");
        &self.values[j]
    }

    fn small(&self, j: usize) -> u64 {
        self.get(j).to_u64().expect("label constant fits in u64")
    }
}

impl Default for LabelConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// Literal appearance gadget; `ubar` and `u` are u(c,ℓ̄) and u(c,ℓ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralGadget {
    pub clause: usize,
    pub literal: i64,
    pub label: usize,
    pub l: NodeId,
    pub ubar: NodeId,
    pub u: NodeId,
    pub v1: NodeId,
    pub v2: NodeId,
    pub v3: NodeId,
    /// (l, ū)
    pub first: EdgeId,
    /// (ū, u)
    pub second: EdgeId,
    /// (l, v1), (v1, v2), (v3, u)
    pub heavy: [EdgeId; 3],
    /// (l, v3)
    pub shortcut_v3: EdgeId,
    /// (v2, u)
    pub shortcut_v2: EdgeId,
    pub aux_ubar: Vec<EdgeId>,
    pub aux_u: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseGadget {
    /// Gadget indices in increasing label order.
    pub gadgets: [usize; 3],
    pub v: NodeId,
    pub tree_edge: EdgeId,
    pub root_edge: EdgeId,
}

/// Links consecutive appearances `from` and `to` of one variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyGadget {
    pub variable: usize,
    pub from: usize,
    pub to: usize,
    pub same_sign: bool,
    pub u1: NodeId,
    pub u2: NodeId,
    /// Tree edges of u1 and u2.
    pub tree: [EdgeId; 2],
    /// Non-tree edges of u1 and u2.
    pub cross: [EdgeId; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LightCatalog {
    pub gadgets: Vec<LiteralGadget>,
    /// Literal → E(ℓ), ascending.
    pub sets: BTreeMap<i64, Vec<EdgeId>>,
}

impl LightCatalog {
    pub fn light_edges(&self) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self.gadgets.iter().flat_map(|g| [g.first, g.second]).collect();
        out.sort_unstable();
        out
    }

    pub fn set(&self, literal: i64) -> &[EdgeId] {
        self.sets.get(&literal).map(Vec::as_slice).unwrap_or(&[])
    }
}

#[derive(Debug, Clone)]
pub struct SatInstance {
    pub game: BroadcastGame,
    pub tree: SpanningTree,
    pub catalog: LightCatalog,
    pub labels: LabelConstants,
    pub k: Rational,
    pub formula: Formula,
    /// Label per variable (index 0 unused, 0 for absent variables).
    pub variable_labels: Vec<usize>,
    pub clauses: Vec<ClauseGadget>,
    pub consistency: Vec<ConsistencyGadget>,
    /// Indexed by node id.
    pub critical: Vec<bool>,
}

fn literal_name(lit: i64) -> String {
    if lit < 0 {
        format!("~x{}", -lit)
    } else {
        format!("x{lit}")
    }
}

fn frac(num: i64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Greedy coloring in variable order, each variable taking the highest free label.
fn color(formula: &Formula) -> Vec<usize> {
    let mut neighbors = vec![BTreeSet::new(); formula.variables + 1];
    let mut seen = vec![false; formula.variables + 1];
    for clause in &formula.clauses {
        for &a in clause {
            seen[a.unsigned_abs() as usize] = true;
            for &b in clause {
                if a != b {
                    neighbors[a.unsigned_abs() as usize].insert(b.unsigned_abs() as usize);
                }
            }
        }
    }
    let mut labels = vec![0usize; formula.variables + 1];
    for x in 1..=formula.variables {
        if !seen[x] {
            continue;
        }
        let used: BTreeSet<usize> = neighbors[x].iter().map(|&y| labels[y]).collect();
        let label = (1..=9).rev().find(|j| !used.contains(j));
        labels[x] = label.expect("at most 8 neighbours leave a label free");
    }
    labels
}

fn validate(formula: &Formula) -> Result<(), GenError> {
    let mut count = vec![0usize; formula.variables + 1];
    if formula.clauses.is_empty() {
        return Err(GenError::NotSat4("no clauses".into()));
    }
    for (i, clause) in formula.clauses.iter().enumerate() {
        if clause.len() != 3 {
            return Err(GenError::NotSat4(format!("clause {} has {} literals", i + 1, clause.len())));
        }
        let vars: BTreeSet<u64> = clause.iter().map(|l| l.unsigned_abs()).collect();
        if vars.len() != 3 {
            return Err(GenError::NotSat4(format!("clause {} repeats a variable", i + 1)));
        }
        for v in vars {
            count[v as usize] += 1;
        }
    }
    if let Some((x, &c)) = count.iter().enumerate().find(|(_, &c)| c > 4) {
        return Err(GenError::NotSat4(format!("variable {x} appears {c} times")));
    }
    Ok(())
}

pub fn gen_3sat4(formula: &Formula, k: &Rational) -> Result<SatInstance, GenError> {
    if *k < int(1) {
        return Err(GenError::Parameter(format!("K = {k} must be at least 1")));
    }
    validate(formula)?;
    let labels = LabelConstants::new();
    let variable_labels = color(formula);
    if let Some(&low) = variable_labels.iter().filter(|&&j| j > 0).min() {
        if low < SMALLEST_LABEL {
            let digits = labels.get(low).to_string().len();
            return Err(GenError::LabelTooSmall {
                label: low,
                estimate: format!("10^{}", digits - 1),
            });
        }
    }
    let label_of = |lit: i64| variable_labels[lit.unsigned_abs() as usize];
    let ordered: Vec<[i64; 3]> = formula
        .clauses
        .iter()
        .map(|c| {
            let mut c = [c[0], c[1], c[2]];
            c.sort_by_key(|&l| label_of(l));
            c
        })
        .collect();

    // Consecutive appearances of each variable, and the consistency nodes they put
    // under each u(c,ℓ) and u(c,ℓ̄).
    let gadget_count = ordered.len() * 3;
    let mut appearances: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (c, clause) in ordered.iter().enumerate() {
        for (p, &lit) in clause.iter().enumerate() {
            appearances.entry(lit.unsigned_abs() as usize).or_default().push(c * 3 + p);
        }
    }
    let lit_at = |g: usize| ordered[g / 3][g % 3];
    let mut plan = Vec::new();
    let mut t_u = vec![0u64; gadget_count];
    let mut t_ubar = vec![0u64; gadget_count];
    for (&var, list) in &appearances {
        for pair in list.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let same = lit_at(a) == lit_at(b);
            if same {
                t_ubar[a] += 1;
            } else {
                t_u[a] += 1;
            }
            t_ubar[b] += 1;
            plan.push((var, a, b, same));
        }
    }

    let n_of = |lit: i64| labels.small(label_of(lit));
    let mut node_estimate = 1usize;
    for clause in &ordered {
        node_estimate += n_of(clause[0]) as usize + 8;
    }
    let mut g = Graph::with_capacity(node_estimate + 2 * plan.len(), node_estimate + 4 * plan.len() + 8 * gadget_count);
    let r = g.add_node("r")?;
    let mut tree_edges = Vec::with_capacity(node_estimate + 2 * plan.len());
    let mut critical_nodes = Vec::new();
    let mut gadgets: Vec<LiteralGadget> = Vec::with_capacity(gadget_count);
    let mut clauses = Vec::with_capacity(ordered.len());
    let half = frac(3, 2);

    for (c, clause) in ordered.iter().enumerate() {
        for (p, &lit) in clause.iter().enumerate() {
            let index = c * 3 + p;
            let n = n_of(lit);
            let prefix = format!("c{}:{}", c + 1, literal_name(lit));
            let l = if p == 0 { r } else { gadgets[index - 1].u };
            let ubar = g.add_node(format!("{prefix}:ubar"))?;
            let u = g.add_node(format!("{prefix}:u"))?;
            let v1 = g.add_node(format!("{prefix}:v1"))?;
            let v2 = g.add_node(format!("{prefix}:v2"))?;
            let v3 = g.add_node(format!("{prefix}:v3"))?;
            let first = g.add_edge(l, ubar, int(1))?;
            let second = g.add_edge(ubar, u, int(1))?;
            let heavy = [
                g.add_edge(l, v1, k.clone())?,
                g.add_edge(v1, v2, k.clone())?,
                g.add_edge(v3, u, k.clone())?,
            ];
            let shortcut_v3 = g.add_edge(l, v3, k + frac(1, n - 3))?;
            let shortcut_v2 = g.add_edge(v2, u, k * &half - frac(1, n + 1))?;
            let ubar_leaves = 2 - t_ubar[index];
            let u_leaves = if p == 2 {
                n - 6 - t_u[index]
            } else {
                n - n_of(clause[p + 1]) - 7 - t_u[index]
            };
            let mut aux_ubar = Vec::with_capacity(ubar_leaves as usize);
            for i in 0..ubar_leaves {
                let a = g.add_node(format!("{prefix}:ubar:a{i}"))?;
                aux_ubar.push(g.add_edge(ubar, a, int(0))?);
            }
            let mut aux_u = Vec::with_capacity(u_leaves as usize);
            for i in 0..u_leaves {
                let a = g.add_node(format!("{prefix}:u:a{i}"))?;
                aux_u.push(g.add_edge(u, a, int(0))?);
            }
            tree_edges.extend([first, second]);
            tree_edges.extend(heavy);
            tree_edges.extend(&aux_ubar);
            tree_edges.extend(&aux_u);
            critical_nodes.extend([v2, v3]);
            gadgets.push(LiteralGadget {
                clause: c,
                literal: lit,
                label: label_of(lit),
                l,
                ubar,
                u,
                v1,
                v2,
                v3,
                first,
                second,
                heavy,
                shortcut_v3,
                shortcut_v2,
                aux_ubar,
                aux_u,
            });
        }
        let v = g.add_node(format!("c{}:v", c + 1))?;
        let last = &gadgets[c * 3 + 2];
        let tree_edge = g.add_edge(v, last.u, k.clone())?;
        let direct = k + frac(1, n_of(clause[0])) + frac(1, n_of(clause[1]) - 3) + frac(1, n_of(clause[2]) - 3);
        let root_edge = g.add_edge(v, r, direct)?;
        tree_edges.push(tree_edge);
        critical_nodes.push(v);
        clauses.push(ClauseGadget {
            gadgets: [c * 3, c * 3 + 1, c * 3 + 2],
            v,
            tree_edge,
            root_edge,
        });
    }

    let mut consistency = Vec::with_capacity(plan.len());
    for (i, &(variable, from, to, same)) in plan.iter().enumerate() {
        let n = labels.small(variable_labels[variable]);
        let (a, b) = (&gadgets[from], &gadgets[to]);
        let u1 = g.add_node(format!("x{variable}:{}:u1", i + 1))?;
        let u2 = g.add_node(format!("x{variable}:{}:u2", i + 1))?;
        let (tree, cross) = if same {
            let w = k + frac(1, 2 * n);
            let t1 = g.add_edge(u1, a.ubar, k.clone())?;
            let x1 = g.add_edge(u1, b.ubar, w.clone())?;
            let t2 = g.add_edge(u2, b.ubar, k.clone())?;
            let x2 = g.add_edge(u2, a.ubar, w)?;
            ([t1, t2], [x1, x2])
        } else {
            let w = k + frac(1, n) + frac(1, 2 * n * n);
            let t1 = g.add_edge(u1, a.u, k.clone())?;
            let x1 = g.add_edge(u1, b.ubar, w)?;
            let t2 = g.add_edge(u2, b.ubar, k.clone())?;
            let x2 = g.add_edge(u2, a.u, k.clone())?;
            ([t1, t2], [x1, x2])
        };
        tree_edges.extend(tree);
        critical_nodes.extend([u1, u2]);
        consistency.push(ConsistencyGadget {
            variable,
            from,
            to,
            same_sign: same,
            u1,
            u2,
            tree,
            cross,
        });
    }

    let mut sets: BTreeMap<i64, Vec<EdgeId>> = BTreeMap::new();
    for gadget in &gadgets {
        sets.entry(gadget.literal).or_default().push(gadget.second);
        sets.entry(-gadget.literal).or_default().push(gadget.first);
    }
    for set in sets.values_mut() {
        set.sort_unstable();
    }
    let mut critical = vec![false; g.node_count()];
    for v in critical_nodes {
        critical[v] = true;
    }
    let game = BroadcastGame::new(g, r)?;
    let tree = SpanningTree::new(game.graph(), r, tree_edges)?;
    Ok(SatInstance {
        game,
        tree,
        catalog: LightCatalog { gadgets, sets },
        labels,
        k: k.clone(),
        formula: formula.clone(),
        variable_labels,
        clauses,
        consistency,
        critical,
    })
}

impl SatInstance {
    fn n(&self, label: usize) -> u64 {
        self.labels.small(label)
    }

    /// Re-derives usage counts and edge weights from the construction rules.
    pub fn self_check(&self) -> Result<(), String> {
        let graph = self.game.graph();
        let k = &self.k;
        let weight_is = |e: EdgeId, want: &Rational, what: &str| {
            if graph.weight(e) == want {
                Ok(())
            } else {
                Err(format!("edge {e} ({what}) weighs {}, expected {want}", graph.weight(e)))
            }
        };
        for gadget in &self.catalog.gadgets {
            let n = self.n(gadget.label);
            if self.tree.usage(gadget.first) != n {
                return Err(format!("edge {} used by {}, expected {n}", gadget.first, self.tree.usage(gadget.first)));
            }
            if self.tree.usage(gadget.second) != n - 3 {
                return Err(format!("edge {} used by {}, expected {}", gadget.second, self.tree.usage(gadget.second), n - 3));
            }
            weight_is(gadget.first, &int(1), "light")?;
            weight_is(gadget.second, &int(1), "light")?;
            for &e in &gadget.heavy {
                weight_is(e, k, "heavy")?;
            }
            weight_is(gadget.shortcut_v3, &(k + frac(1, n - 3)), "(l, v3)")?;
            weight_is(gadget.shortcut_v2, &(k * frac(3, 2) - frac(1, n + 1)), "(v2, u)")?;
            for &e in gadget.aux_u.iter().chain(&gadget.aux_ubar) {
                weight_is(e, &int(0), "auxiliary")?;
            }
        }
        for clause in &self.clauses {
            let n: Vec<u64> = clause.gadgets.iter().map(|&i| self.n(self.catalog.gadgets[i].label)).collect();
            weight_is(clause.tree_edge, k, "clause")?;
            let direct = k + frac(1, n[0]) + frac(1, n[1] - 3) + frac(1, n[2] - 3);
            weight_is(clause.root_edge, &direct, "clause shortcut")?;
        }
        for gadget in &self.consistency {
            let n = self.n(self.variable_labels[gadget.variable]);
            let (a, b) = (&self.catalog.gadgets[gadget.from], &self.catalog.gadgets[gadget.to]);
            let ends = |e: EdgeId| {
                let edge = graph.edge(e);
                (edge.u, edge.v)
            };
            let expect = if gadget.same_sign {
                [
                    (gadget.tree[0], (gadget.u1, a.ubar), k.clone()),
                    (gadget.tree[1], (gadget.u2, b.ubar), k.clone()),
                    (gadget.cross[0], (gadget.u1, b.ubar), k + frac(1, 2 * n)),
                    (gadget.cross[1], (gadget.u2, a.ubar), k + frac(1, 2 * n)),
                ]
            } else {
                [
                    (gadget.tree[0], (gadget.u1, a.u), k.clone()),
                    (gadget.tree[1], (gadget.u2, b.ubar), k.clone()),
                    (gadget.cross[0], (gadget.u1, b.ubar), k + frac(1, n) + frac(1, 2 * n * n)),
                    (gadget.cross[1], (gadget.u2, a.u), k.clone()),
                ]
            };
            for (e, pair, w) in expect {
                if ends(e) != pair {
                    return Err(format!("edge {e} joins {:?}, expected {pair:?}", ends(e)));
                }
                weight_is(e, &w, "consistency")?;
            }
        }
        let light: BTreeSet<EdgeId> = self.catalog.light_edges().into_iter().collect();
        let unit: BTreeSet<EdgeId> = (0..graph.edge_count()).filter(|&e| *graph.weight(e) == int(1)).collect();
        if light != unit {
            return Err("light catalog does not match the unit-weight edges".into());
        }
        for (&lit, set) in &self.catalog.sets {
            let other = self.catalog.set(-lit);
            if set.iter().any(|e| other.contains(e)) {
                return Err(format!("E({lit}) and E({}) intersect", -lit));
            }
        }
        if !is_mst(graph, &self.tree) {
            return Err("designated tree is not a minimum spanning tree".into());
        }
        Ok(())
    }

    /// Exactly one light edge per literal gadget.
    pub fn is_balanced(&self, subsidized: &BTreeSet<EdgeId>) -> bool {
        self.catalog
            .gadgets
            .iter()
            .all(|g| subsidized.contains(&g.first) != subsidized.contains(&g.second))
    }

    /// Per variable, the subsidized light edges of its gadgets are exactly E(x) or exactly E(x̄).
    pub fn is_consistent(&self, subsidized: &BTreeSet<EdgeId>) -> bool {
        let mut vars: BTreeSet<i64> = BTreeSet::new();
        for g in &self.catalog.gadgets {
            vars.insert(g.literal.abs());
        }
        vars.into_iter().all(|x| {
            let pos: BTreeSet<EdgeId> = self.catalog.set(x).iter().copied().collect();
            let neg: BTreeSet<EdgeId> = self.catalog.set(-x).iter().copied().collect();
            let mine: BTreeSet<EdgeId> = pos.union(&neg).filter(|e| subsidized.contains(e)).copied().collect();
            mine == pos || mine == neg
        })
    }

    /// Some literal of the clause has E(ℓ) fully subsidized.
    pub fn clause_holds(&self, clause: usize, subsidized: &BTreeSet<EdgeId>) -> bool {
        self.clauses[clause].gadgets.iter().any(|&i| {
            let lit = self.catalog.gadgets[i].literal;
            self.catalog.set(lit).iter().all(|e| subsidized.contains(e))
        })
    }

    /// Balanced, consistent and every clause holds.
    pub fn characterization(&self, subsidized: &BTreeSet<EdgeId>) -> bool {
        self.is_balanced(subsidized)
            && self.is_consistent(subsidized)
            && (0..self.clauses.len()).all(|c| self.clause_holds(c, subsidized))
    }

    /// x = true iff E(x) is subsidized; None unless balanced and consistent.
    pub fn truth_assignment(&self, subsidized: &BTreeSet<EdgeId>) -> Option<Vec<bool>> {
        if !(self.is_balanced(subsidized) && self.is_consistent(subsidized)) {
            return None;
        }
        let mut truth = vec![false; self.formula.variables + 1];
        for x in 1..=self.formula.variables as i64 {
            let set = self.catalog.set(x);
            truth[x as usize] = !set.is_empty() && set.iter().all(|e| subsidized.contains(e));
        }
        Some(truth)
    }

    /// Light edges E(x) for true variables and E(x̄) for false ones.
    pub fn light_assignment(&self, truth: &[bool]) -> BTreeSet<EdgeId> {
        let mut out = BTreeSet::new();
        for g in &self.catalog.gadgets {
            let x = g.literal.abs();
            let lit = if truth[x as usize] { x } else { -x };
            out.extend(self.catalog.set(lit).iter().copied());
        }
        out
    }

    pub fn subsidies(&self, subsidized: &BTreeSet<EdgeId>) -> SubsidyAssignment {
        SubsidyAssignment::full(self.game.graph(), subsidized.iter().copied())
    }

    /// No non-critical player has a profitable single-edge detour.
    pub fn noncritical_stable(&self, subsidized: &BTreeSet<EdgeId>) -> bool {
        let b = self.subsidies(subsidized);
        let nodes = (0..self.game.graph().node_count()).filter(|&v| !self.critical[v]);
        broadcast_check_among(&self.game, &self.tree, &b, nodes).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_constants() {
        let c = LabelConstants::new();
        assert_eq!(c.get(9), &BigInt::from(7));
        assert_eq!(c.get(8), &BigInt::from(196));
        assert_eq!(c.get(7), &BigInt::from(153_664));
        assert_eq!(c.get(6), &(BigInt::from(4) * BigInt::from(153_664u64).pow(2)));
    }

    #[test]
    fn rejects_bad_shapes() {
        let two = Formula {
            variables: 3,
            clauses: vec![vec![1, 2]],
        };
        assert!(matches!(gen_3sat4(&two, &default_k()), Err(GenError::NotSat4(_))));
        let repeat = Formula {
            variables: 3,
            clauses: vec![vec![1, -1, 2]],
        };
        assert!(matches!(gen_3sat4(&repeat, &default_k()), Err(GenError::NotSat4(_))));
        // Four mutually overlapping clauses force a fourth label.
        let dense = Formula {
            variables: 4,
            clauses: vec![vec![1, 2, 3], vec![1, 2, 4], vec![1, 3, 4], vec![2, 3, 4]],
        };
        assert!(matches!(gen_3sat4(&dense, &default_k()), Err(GenError::LabelTooSmall { label: 6, .. })));
    }
}
