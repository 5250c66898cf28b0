//! Dense exact simplex over the rationals.
//!
//! Problems are in equality form `A x = b, x >= 0`. Pivoting follows Bland's
//! rule in both phases, so the method terminates without any tolerance.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Outcome {
    Infeasible,
    Unbounded,
    Optimal(Rational),
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    /// Reduced costs; the last entry holds minus the objective value.
    obj: Vec<Rational>,
    basis: Vec<usize>,
    structural: usize,
}

impl Tableau {
    /// Sets up phase one: every row gets an artificial basic variable.
    fn phase_one(a: &[Vec<Rational>], b: &[Rational], structural: usize) -> Self {
        let m = a.len();
        let width = structural + m + 1;
        let mut rows = Vec::with_capacity(m);
        for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
            debug_assert_eq!(row.len(), structural);
            let flip = rhs.is_negative();
            let mut t = Vec::with_capacity(width);
            t.extend(row.iter().map(|x| if flip { -x } else { x.clone() }));
            t.extend((0..m).map(|k| {
                if k == i {
                    Rational::from_integer(1.into())
                } else {
                    Rational::zero()
                }
            }));
            t.push(if flip { -rhs } else { rhs.clone() });
            rows.push(t);
        }

        // Maximise minus the sum of artificials; reduced costs of structural
        // columns are the column sums.
        let mut obj = alloc::vec![Rational::zero(); width];
        for row in &rows {
            for j in 0..structural {
                obj[j] += &row[j];
            }
            obj[width - 1] += &row[width - 1];
        }

        Self {
            rows,
            obj,
            basis: (structural..structural + m).collect(),
            structural,
        }
    }

    fn rhs(&self) -> usize {
        self.obj.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = core::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row, &pivot_row, c);
            }
        }
        eliminate(&mut self.obj, &pivot_row, c);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Runs simplex iterations over the columns `0..enter_limit`.
    /// Returns `false` when the objective is unbounded.
    fn optimize(&mut self, enter_limit: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(c) = (0..enter_limit).find(|&j| self.obj[j].is_positive()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
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
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    /// Runs phase one. On success, artificial variables are out of the basis
    /// and redundant rows are gone.
    fn find_feasible(&mut self) -> bool {
        let bounded = self.optimize(self.obj.len() - 1);
        debug_assert!(bounded, "phase one objective is bounded by zero");
        let rhs = self.rhs();
        if !self.obj[rhs].is_zero() {
            return false;
        }
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.structural {
                match (0..self.structural).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        true
    }

    fn set_objective(&mut self, cost: &[Rational]) {
        let rhs = self.rhs();
        for (j, x) in self.obj.iter_mut().enumerate() {
            *x = if j < self.structural {
                cost[j].clone()
            } else {
                Rational::zero()
            };
        }
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, x) in self.obj.iter_mut().zip(&row[..self.structural]) {
                if !x.is_zero() {
                    *o -= cb * x;
                }
            }
            self.obj[rhs] -= cb * &row[rhs];
        }
    }
}

fn eliminate(row: &mut [Rational], pivot_row: &[Rational], c: usize) {
    let factor = row[c].clone();
    if factor.is_zero() {
        return;
    }
    for (x, p) in row.iter_mut().zip(pivot_row) {
        if !p.is_zero() {
            *x -= &factor * p;
        }
    }
}

/// Decides whether `A x = b` has a solution with `x >= 0`.
pub(crate) fn is_feasible(a: &[Vec<Rational>], b: &[Rational], structural: usize) -> bool {
    Tableau::phase_one(a, b, structural).find_feasible()
}

/// Maximises `cost . x` subject to `A x = b, x >= 0`.
pub(crate) fn maximize(a: &[Vec<Rational>], b: &[Rational], cost: &[Rational]) -> Outcome {
    let mut tab = Tableau::phase_one(a, b, cost.len());
    if !tab.find_feasible() {
        return Outcome::Infeasible;
    }
    tab.set_objective(cost);
    if !tab.optimize(tab.structural) {
        return Outcome::Unbounded;
    }
    let rhs = tab.rhs();
    Outcome::Optimal(-&tab.obj[rhs])
}
