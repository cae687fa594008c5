//! Exact two-phase simplex over rationals with Bland's rule on a dense tableau.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Variable bounds; `None` is an infinite end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
}

impl Bound {
    pub fn non_negative() -> Self {
        Bound {
            lo: Some(Rational::zero()),
            hi: None,
        }
    }

    pub fn between(lo: Rational, hi: Rational) -> Self {
        Bound {
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    pub fn free() -> Self {
        Bound { lo: None, hi: None }
    }
}

/// minimize objective·x subject to rows and bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub rows: Vec<Row>,
    pub bounds: Vec<Bound>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("row {row} has {found} coefficients, expected {expected}")]
    RowWidth { row: usize, found: usize, expected: usize },
    #[error("{found} bounds for {expected} variables")]
    BoundCount { found: usize, expected: usize },
    #[error("variable {0} has lo > hi")]
    EmptyBound(usize),
}

impl LinearProgram {
    /// `vars` variables with zero objective and bounds [0, ∞).
    pub fn new(vars: usize) -> Self {
        LinearProgram {
            objective: vec![Rational::zero(); vars],
            rows: Vec::new(),
            bounds: vec![Bound::non_negative(); vars],
        }
    }

    pub fn var_count(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.rows.push(Row { coeffs, relation, rhs });
    }

    /// Adds a row given as sparse (index, coefficient) terms.
    pub fn add_sparse_row(&mut self, terms: impl IntoIterator<Item = (usize, Rational)>, relation: Relation, rhs: Rational) {
        let mut coeffs = vec![Rational::zero(); self.var_count()];
        for (j, c) in terms {
            coeffs[j] += c;
        }
        self.add_row(coeffs, relation, rhs);
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.var_count();
        if self.bounds.len() != n {
            return Err(LpError::BoundCount {
                found: self.bounds.len(),
                expected: n,
            });
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.coeffs.len() != n {
                return Err(LpError::RowWidth {
                    row: i,
                    found: row.coeffs.len(),
                    expected: n,
                });
            }
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if let (Some(lo), Some(hi)) = (&b.lo, &b.hi) {
                if lo > hi {
                    return Err(LpError::EmptyBound(j));
                }
            }
        }
        Ok(())
    }

    /// Exact feasibility of `x` against every row and bound.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.var_count() {
            return false;
        }
        let bounds_ok = self.bounds.iter().zip(x).all(|(b, v)| {
            b.lo.as_ref().is_none_or(|lo| v >= lo) && b.hi.as_ref().is_none_or(|hi| v <= hi)
        });
        bounds_ok
            && self.rows.iter().all(|row| {
                let lhs = dot(&row.coeffs, x);
                match row.relation {
                    Relation::Le => lhs <= row.rhs,
                    Relation::Ge => lhs >= row.rhs,
                    Relation::Eq => lhs == row.rhs,
                }
            })
    }

    pub fn value(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(c, _)| !c.is_zero())
        .fold(Rational::zero(), |acc, (c, v)| acc + c * v)
}

/// How an original variable is expressed through non-negative columns.
#[derive(Debug, Clone)]
enum Map {
    /// x = offset + col
    Shift { col: usize, offset: Rational },
    /// x = offset − col
    Mirror { col: usize, offset: Rational },
    /// x = plus − minus
    Split { plus: usize, minus: usize },
    Fixed(Rational),
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.rows[r][c].clone();
        for j in 0..=w {
            if !self.rows[r][j].is_zero() {
                self.rows[r][j] /= &p;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..=w).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row.is_empty() {
                continue;
            }
            let f = row[c].clone();
            if f.is_zero() {
                continue;
            }
            for &j in &nz {
                row[j] -= &f * &pivot_row[j];
            }
        }
        let f = self.obj[c].clone();
        if !f.is_zero() {
            for &j in &nz {
                self.obj[j] -= &f * &pivot_row[j];
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Bland's rule; `allowed` masks columns that may enter. Returns false when unbounded.
    fn optimize(&mut self, allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.width).find(|&j| allowed[j] && self.obj[j].is_negative());
            let Some(c) = entering else {
                return true;
            };
            let w = self.width;
            let mut best: Option<(Rational, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[w] / &row[c];
                let better = match &best {
                    None => true,
                    Some((r, _, b)) => ratio < *r || (ratio == *r && self.basis[i] < *b),
                };
                if better {
                    best = Some((ratio, i, self.basis[i]));
                }
            }
            match best {
                None => return false,
                Some((_, r, _)) => self.pivot(r, c),
            }
        }
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    let n = lp.var_count();

    // Column layout for the transformed variables.
    let mut maps = Vec::with_capacity(n);
    let mut cols = 0usize;
    let mut extra_rows: Vec<(usize, Rational)> = Vec::new();
    for b in &lp.bounds {
        let map = match (&b.lo, &b.hi) {
            (Some(lo), Some(hi)) if lo == hi => Map::Fixed(lo.clone()),
            (Some(lo), hi) => {
                let col = cols;
                cols += 1;
                if let Some(hi) = hi {
                    extra_rows.push((col, hi - lo));
                }
                Map::Shift { col, offset: lo.clone() }
            }
            (None, Some(hi)) => {
                let col = cols;
                cols += 1;
                Map::Mirror { col, offset: hi.clone() }
            }
            (None, None) => {
                cols += 2;
                Map::Split {
                    plus: cols - 2,
                    minus: cols - 1,
                }
            }
        };
        maps.push(map);
    }

    // Rows over transformed columns: coeffs, relation, rhs.
    let mut std_rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    let mut infeasible_constant = false;
    for row in &lp.rows {
        let mut coeffs = vec![Rational::zero(); cols];
        let mut rhs = row.rhs.clone();
        for (j, a) in row.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match &maps[j] {
                Map::Shift { col, offset } => {
                    coeffs[*col] += a;
                    rhs -= a * offset;
                }
                Map::Mirror { col, offset } => {
                    coeffs[*col] -= a;
                    rhs -= a * offset;
                }
                Map::Split { plus, minus } => {
                    coeffs[*plus] += a;
                    coeffs[*minus] -= a;
                }
                Map::Fixed(v) => rhs -= a * v,
            }
        }
        if coeffs.iter().all(Zero::is_zero) {
            let holds = match row.relation {
                Relation::Le => rhs >= Rational::zero(),
                Relation::Ge => rhs <= Rational::zero(),
                Relation::Eq => rhs.is_zero(),
            };
            infeasible_constant |= !holds;
            continue;
        }
        std_rows.push((coeffs, row.relation, rhs));
    }
    if infeasible_constant {
        return Ok(LpOutcome::Infeasible);
    }
    for (col, cap) in extra_rows {
        let mut coeffs = vec![Rational::zero(); cols];
        coeffs[col] = Rational::from_integer(1.into());
        std_rows.push((coeffs, Relation::Le, cap));
    }

    // Normalize to non-negative right-hand sides.
    for (coeffs, rel, rhs) in std_rows.iter_mut() {
        if rhs.is_negative() {
            for c in coeffs.iter_mut() {
                *c = -&*c;
            }
            *rhs = -&*rhs;
            *rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    let m = std_rows.len();
    let slack_count = std_rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let art_count = std_rows.iter().filter(|r| r.1 != Relation::Le).count();
    let width = cols + slack_count + art_count;
    let art_start = cols + slack_count;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut s, mut a) = (cols, art_start);
    for (coeffs, rel, rhs) in std_rows {
        let mut row = coeffs;
        row.resize(width + 1, Rational::zero());
        row[width] = rhs;
        match rel {
            Relation::Le => {
                row[s] = Rational::from_integer(1.into());
                basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                row[s] = Rational::from_integer((-1).into());
                s += 1;
                row[a] = Rational::from_integer(1.into());
                basis.push(a);
                a += 1;
            }
            Relation::Eq => {
                row[a] = Rational::from_integer(1.into());
                basis.push(a);
                a += 1;
            }
        }
        rows.push(row);
    }

    let mut t = Tableau {
        rows,
        obj: vec![Rational::zero(); width + 1],
        basis,
        width,
    };

    // Phase 1: minimize the sum of artificials.
    if art_count > 0 {
        for j in art_start..width {
            t.obj[j] = Rational::from_integer(1.into());
        }
        for i in 0..m {
            if t.basis[i] >= art_start {
                for j in 0..=width {
                    if !t.rows[i][j].is_zero() {
                        let v = t.rows[i][j].clone();
                        t.obj[j] -= v;
                    }
                }
            }
        }
        let all = vec![true; width];
        t.optimize(&all);
        if !t.obj[width].is_zero() {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive remaining artificials out of the basis, dropping redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= art_start {
                match (0..art_start).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(c) => {
                        t.pivot(i, c);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    // Phase 2 objective in transformed columns.
    let mut cost = vec![Rational::zero(); width + 1];
    let mut constant = Rational::zero();
    for (j, c) in lp.objective.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        match &maps[j] {
            Map::Shift { col, offset } => {
                cost[*col] += c;
                constant += c * offset;
            }
            Map::Mirror { col, offset } => {
                cost[*col] -= c;
                constant += c * offset;
            }
            Map::Split { plus, minus } => {
                cost[*plus] += c;
                cost[*minus] -= c;
            }
            Map::Fixed(v) => constant += c * v,
        }
    }
    for i in 0..t.rows.len() {
        let cb = cost[t.basis[i]].clone();
        if cb.is_zero() {
            continue;
        }
        for (c, a) in cost.iter_mut().zip(&t.rows[i]) {
            if !a.is_zero() {
                *c -= &cb * a;
            }
        }
    }
    t.obj = cost;
    let allowed: Vec<bool> = (0..width).map(|j| j < art_start).collect();
    if !t.optimize(&allowed) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut y = vec![Rational::zero(); width];
    for (i, &b) in t.basis.iter().enumerate() {
        y[b] = t.rows[i][width].clone();
    }
    let x: Vec<Rational> = maps
        .iter()
        .map(|map| match map {
            Map::Shift { col, offset } => offset + &y[*col],
            Map::Mirror { col, offset } => offset - &y[*col],
            Map::Split { plus, minus } => &y[*plus] - &y[*minus],
            Map::Fixed(v) => v.clone(),
        })
        .collect();
    assert!(lp.is_feasible(&x), "simplex produced an infeasible point");
    let value = lp.value(&x);
    debug_assert_eq!(value, constant - &t.obj[width]);
    Ok(LpOutcome::Optimal { x, value })
}
