//! Exact two-phase simplex over the rationals.
//!
//! Pivoting follows Bland's rule, so the method terminates on degenerate
//! problems. When phase one proves infeasibility the phase-one duals are
//! returned as a Farkas certificate.

use num_traits::{One, Signed, Zero};

use crate::lattice::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `maximize objective . x` subject to linear constraints, with each
/// variable either nonnegative or free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    free: Vec<bool>,
    constraints: Vec<Constraint>,
    objective: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    /// `y` with one entry per constraint such that `y^T A` is `<= 0` on
    /// nonnegative columns and `= 0` on free columns, `y_i <= 0` on `Le`
    /// rows, `y_i >= 0` on `Ge` rows, and `y^T b > 0`.
    Infeasible { farkas: Vec<Rational> },
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            free: vec![false; num_vars],
            constraints: Vec::new(),
            objective: vec![Rational::zero(); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width");
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn maximize(&mut self, objective: Vec<Rational>) {
        assert_eq!(objective.len(), self.num_vars, "objective width");
        self.objective = objective;
    }

    /// Check a Farkas vector against the contract documented on
    /// [`LpOutcome::Infeasible`].
    pub fn verify_farkas(&self, y: &[Rational]) -> bool {
        if y.len() != self.constraints.len() {
            return false;
        }
        for (yi, c) in y.iter().zip(&self.constraints) {
            match c.relation {
                Relation::Le if yi.is_positive() => return false,
                Relation::Ge if yi.is_negative() => return false,
                _ => {}
            }
        }
        for j in 0..self.num_vars {
            let col: Rational = y
                .iter()
                .zip(&self.constraints)
                .map(|(yi, c)| yi * &c.coeffs[j])
                .sum();
            if col.is_positive() || (self.free[j] && !col.is_zero()) {
                return false;
            }
        }
        let yb: Rational = y.iter().zip(&self.constraints).map(|(yi, c)| yi * &c.rhs).sum();
        yb.is_positive()
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

/// Dense tableau in standard form `A x = b, x >= 0, b >= 0` with one
/// artificial column per row.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// reduced costs; the last entry is minus the objective value
    cost: Vec<Rational>,
    /// number of structural columns (original splits and slacks)
    n_struct: usize,
    /// original row index and sign applied for each tableau row
    row_origin: Vec<(usize, bool)>,
    /// `(positive column, negative column)` per original variable
    var_cols: Vec<(usize, Option<usize>)>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let m = lp.constraints.len();
        let mut var_cols = Vec::with_capacity(lp.num_vars);
        let mut n = 0;
        for j in 0..lp.num_vars {
            if lp.free[j] {
                var_cols.push((n, Some(n + 1)));
                n += 2;
            } else {
                var_cols.push((n, None));
                n += 1;
            }
        }
        let mut slack_col = Vec::with_capacity(m);
        for c in &lp.constraints {
            if c.relation == Relation::Eq {
                slack_col.push(None);
            } else {
                slack_col.push(Some(n));
                n += 1;
            }
        }
        let n_struct = n;
        let width = n_struct + m + 1;
        let mut rows = Vec::with_capacity(m);
        let mut row_origin = Vec::with_capacity(m);
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![Rational::zero(); width];
            for (j, a) in c.coeffs.iter().enumerate() {
                let (pos, neg) = var_cols[j];
                row[pos] = a.clone();
                if let Some(neg) = neg {
                    row[neg] = -a.clone();
                }
            }
            if let Some(s) = slack_col[i] {
                row[s] = match c.relation {
                    Relation::Le => Rational::one(),
                    _ => -Rational::one(),
                };
            }
            row[width - 1] = c.rhs.clone();
            let negated = c.rhs.is_negative();
            if negated {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            row[n_struct + i] = Rational::one();
            rows.push(row);
            row_origin.push((i, negated));
        }
        // phase-one reduced costs: 1 on artificials minus the column sums
        let mut cost = vec![Rational::zero(); width];
        for (j, c) in cost.iter_mut().enumerate() {
            if j >= n_struct && j < n_struct + m {
                continue;
            }
            let s: Rational = rows.iter().map(|r| &r[j]).sum();
            *c = -s;
        }
        Tableau {
            rows,
            basis: (n_struct..n_struct + m).collect(),
            cost,
            n_struct,
            row_origin,
            var_cols,
        }
    }

    fn width(&self) -> usize {
        self.cost.len()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x = &*x - &f * p;
                }
            }
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (x, p) in self.cost.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x = &*x - &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule simplex on the columns `0..limit`. Returns false when
    /// the problem is unbounded.
    fn simplex(&mut self, limit: usize) -> bool {
        let last = self.width() - 1;
        loop {
            let Some(enter) = (0..limit).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[last] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let m = self.rows.len();
        let last = self.width() - 1;
        let all = self.n_struct + m;
        // phase one cannot be unbounded: its objective is bounded below by zero
        self.simplex(all);
        if self.cost[last].is_negative() {
            let mut farkas = vec![Rational::zero(); m];
            for (k, &(orig, negated)) in self.row_origin.iter().enumerate() {
                let y = Rational::one() - &self.cost[self.n_struct + k];
                farkas[orig] = if negated { -y } else { y };
            }
            debug_assert!(lp.verify_farkas(&farkas));
            return LpOutcome::Infeasible { farkas };
        }

        // drive zero-valued artificials out of the basis; drop redundant rows
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.n_struct {
                match (0..self.n_struct).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }

        // phase two: minimize -objective over structural columns
        let mut c = vec![Rational::zero(); self.width()];
        for (j, obj) in lp.objective.iter().enumerate() {
            let (pos, neg) = self.var_cols[j];
            c[pos] = -obj.clone();
            if let Some(neg) = neg {
                c[neg] = obj.clone();
            }
        }
        let mut cost = c.clone();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if c[b].is_zero() {
                continue;
            }
            for (x, a) in cost.iter_mut().zip(row) {
                *x = &*x - &c[b] * a;
            }
        }
        // artificial columns are no longer eligible
        self.cost = cost;
        if !self.simplex(self.n_struct) {
            return LpOutcome::Unbounded;
        }

        let mut xs = vec![Rational::zero(); self.n_struct];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.n_struct {
                xs[b] = row[last].clone();
            }
        }
        let x: Vec<Rational> = self
            .var_cols
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => &xs[pos] - &xs[neg],
                None => xs[pos].clone(),
            })
            .collect();
        let value = x.iter().zip(&lp.objective).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal { x, value }
    }
}
