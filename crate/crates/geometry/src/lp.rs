//! Exact two-phase simplex with Bland's rule.

use num::{Signed, Zero};

use crate::scalar::{RVec, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: RVec, value: Scalar },
    Infeasible,
    Unbounded,
}

/// `maximize <c, x>` subject to equalities, `<=` rows and per-variable sign restrictions.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    free: Vec<bool>,
    eqs: Vec<(RVec, Scalar)>,
    les: Vec<(RVec, Scalar)>,
}

impl LinearProgram {
    /// All variables start out sign-restricted (`x >= 0`).
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            free: vec![false; num_vars],
            eqs: Vec::new(),
            les: Vec::new(),
        }
    }

    pub fn with_free_vars(num_vars: usize) -> Self {
        let mut lp = Self::new(num_vars);
        lp.free = vec![true; num_vars];
        lp
    }

    pub fn set_free(&mut self, i: usize, free: bool) {
        self.free[i] = free;
    }

    pub fn add_eq(&mut self, row: RVec, rhs: Scalar) {
        debug_assert_eq!(row.dim(), self.num_vars);
        self.eqs.push((row, rhs));
    }

    pub fn add_le(&mut self, row: RVec, rhs: Scalar) {
        debug_assert_eq!(row.dim(), self.num_vars);
        self.les.push((row, rhs));
    }

    pub fn add_ge(&mut self, row: RVec, rhs: Scalar) {
        self.add_le(row.neg(), -rhs);
    }

    pub fn feasible_point(&self) -> Option<RVec> {
        match self.maximize(&RVec::zeros(self.num_vars)) {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible_point().is_some()
    }

    pub fn maximize(&self, c: &RVec) -> LpOutcome {
        // Column layout: one column per restricted variable, two per free one, then slacks.
        let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.num_vars);
        let mut ncols = 0;
        for &f in &self.free {
            if f {
                col_of.push((ncols, Some(ncols + 1)));
                ncols += 2;
            } else {
                col_of.push((ncols, None));
                ncols += 1;
            }
        }
        let structural = ncols;
        ncols += self.les.len();
        let nrows = self.eqs.len() + self.les.len();

        let mut tab: Vec<Vec<Scalar>> = Vec::with_capacity(nrows);
        let expand = |row: &RVec| {
            let mut out = vec![Scalar::zero(); ncols];
            for (v, &(p, n)) in col_of.iter().enumerate() {
                out[p] = row[v].clone();
                if let Some(n) = n {
                    out[n] = -row[v].clone();
                }
            }
            out
        };
        for (row, rhs) in &self.eqs {
            let mut r = expand(row);
            r.push(rhs.clone());
            tab.push(r);
        }
        for (k, (row, rhs)) in self.les.iter().enumerate() {
            let mut r = expand(row);
            r[structural + k] = Scalar::from_integer(1.into());
            r.push(rhs.clone());
            tab.push(r);
        }
        for r in tab.iter_mut() {
            if r[ncols].is_negative() {
                for x in r.iter_mut() {
                    *x = -x.clone();
                }
            }
        }
        // Artificial columns ncols..ncols+nrows, rhs moves to the end.
        let total = ncols + nrows;
        for (i, r) in tab.iter_mut().enumerate() {
            let rhs = r.pop().unwrap();
            r.extend((0..nrows).map(|k| {
                if k == i {
                    Scalar::from_integer(1.into())
                } else {
                    Scalar::zero()
                }
            }));
            r.push(rhs);
        }
        let mut basis: Vec<usize> = (ncols..total).collect();

        // Phase one: maximize -(sum of artificials).
        let mut cost1 = vec![Scalar::zero(); total];
        for c in cost1.iter_mut().skip(ncols) {
            *c = -Scalar::from_integer(1.into());
        }
        let mut obj = objective_row(&tab, &basis, &cost1, total);
        let res = run_simplex(&mut tab, &mut basis, &mut obj, total);
        debug_assert!(res, "phase one is bounded");
        if obj[total].is_negative() {
            return LpOutcome::Infeasible;
        }
        // Drive artificials out of the basis; rows that cannot pivot are redundant.
        let mut i = 0;
        while i < tab.len() {
            if basis[i] >= ncols {
                if let Some(j) = (0..ncols).find(|&j| !tab[i][j].is_zero()) {
                    pivot(&mut tab, &mut obj, i, j);
                    basis[i] = j;
                    i += 1;
                } else {
                    tab.remove(i);
                    basis.remove(i);
                }
            } else {
                i += 1;
            }
        }
        for r in tab.iter_mut() {
            let rhs = r.pop().unwrap();
            r.truncate(ncols);
            r.push(rhs);
        }

        // Phase two.
        let mut cost2 = vec![Scalar::zero(); ncols];
        for (v, &(p, n)) in col_of.iter().enumerate() {
            cost2[p] = c[v].clone();
            if let Some(n) = n {
                cost2[n] = -c[v].clone();
            }
        }
        let mut obj = objective_row(&tab, &basis, &cost2, ncols);
        if !run_simplex(&mut tab, &mut basis, &mut obj, ncols) {
            return LpOutcome::Unbounded;
        }
        let mut colval = vec![Scalar::zero(); ncols];
        for (i, &b) in basis.iter().enumerate() {
            colval[b] = tab[i][ncols].clone();
        }
        let x: RVec = col_of
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => &colval[p] - &colval[n],
                None => colval[p].clone(),
            })
            .collect();
        let value = c.dot(&x);
        LpOutcome::Optimal { x, value }
    }
}

fn objective_row(tab: &[Vec<Scalar>], basis: &[usize], cost: &[Scalar], ncols: usize) -> Vec<Scalar> {
    let mut obj: Vec<Scalar> = (0..ncols).map(|j| -cost[j].clone()).collect();
    obj.push(Scalar::zero());
    for (i, &b) in basis.iter().enumerate() {
        let cb = &cost[b];
        if cb.is_zero() {
            continue;
        }
        for j in 0..ncols {
            if !tab[i][j].is_zero() {
                obj[j] += cb * &tab[i][j];
            }
        }
        obj[ncols] += cb * &tab[i][tab[i].len() - 1];
    }
    obj
}

/// Runs Bland's rule to optimality. Returns false if unbounded.
fn run_simplex(tab: &mut [Vec<Scalar>], basis: &mut [usize], obj: &mut Vec<Scalar>, ncols: usize) -> bool {
    loop {
        let Some(enter) = (0..ncols).find(|&j| obj[j].is_negative()) else {
            return true;
        };
        let rhs = tab.first().map(|r| r.len() - 1).unwrap_or(0);
        let mut leave: Option<(usize, Scalar)> = None;
        for i in 0..tab.len() {
            if tab[i][enter].is_positive() {
                let ratio = &tab[i][rhs] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            return false;
        };
        pivot(tab, obj, row, enter);
        basis[row] = enter;
    }
}

fn pivot(tab: &mut [Vec<Scalar>], obj: &mut [Scalar], row: usize, col: usize) {
    let p = tab[row][col].clone();
    for x in tab[row].iter_mut() {
        *x /= &p;
    }
    let prow = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let k = r[col].clone();
        for (x, y) in r.iter_mut().zip(&prow) {
            if !y.is_zero() {
                *x -= &k * y;
            }
        }
    }
    if !obj[col].is_zero() {
        let k = obj[col].clone();
        for (x, y) in obj.iter_mut().zip(&prow) {
            if !y.is_zero() {
                *x -= &k * y;
            }
        }
    }
}

/// Decides `q in cone(rays) + span(lineality)` by phase-one feasibility.
pub fn cone_hull_contains(rays: &[RVec], lineality: &[RVec], q: &RVec) -> bool {
    let dim = q.dim();
    let n = rays.len() + lineality.len();
    if n == 0 {
        return q.is_zero();
    }
    let mut lp = LinearProgram::new(n);
    for k in rays.len()..n {
        lp.set_free(k, true);
    }
    for i in 0..dim {
        let row: RVec = rays
            .iter()
            .chain(lineality)
            .map(|g| g[i].clone())
            .collect();
        lp.add_eq(row, q[i].clone());
    }
    lp.is_feasible()
}
