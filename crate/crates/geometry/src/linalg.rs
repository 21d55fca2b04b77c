//! Exact dense linear algebra over the rationals. Matrices are lists of rows.

use num::{One, Zero};

use crate::scalar::{RVec, Scalar};

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[RVec], ncols: usize) -> (Vec<RVec>, Vec<usize>) {
    let mut m: Vec<RVec> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Scalar::one() / &m[r][c];
        m[r] = m[r].scale(&inv);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let k = -m[i][c].clone();
                m[i] = m[i].axpy(&k, &m[r]);
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[RVec], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : <row, x> = 0 for every row}`.
pub fn nullspace(rows: &[RVec], ncols: usize) -> Vec<RVec> {
    let (r, pivots) = rref(rows, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = RVec::zeros(ncols);
        v[free] = Scalar::one();
        for (row, &pc) in r.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Some solution of `A x = b`, if one exists.
pub fn solve(a: &[RVec], b: &[Scalar], ncols: usize) -> Option<RVec> {
    let aug: Vec<RVec> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = RVec::zeros(ncols);
    for (row, &pc) in r.iter().zip(&pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

/// Solves a square nonsingular system; `None` when singular.
pub fn solve_unique(a: &[RVec], b: &[Scalar]) -> Option<RVec> {
    let n = a.len();
    if rank(a, n) < n {
        return None;
    }
    solve(a, b, n)
}

/// A maximal linearly independent subset, chosen greedily in order.
pub fn independent_subset(vectors: &[RVec], ncols: usize) -> Vec<RVec> {
    let mut chosen: Vec<RVec> = Vec::new();
    for v in vectors {
        let mut trial = chosen.clone();
        trial.push(v.clone());
        if rank(&trial, ncols) == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

/// Orthogonal projection of `x` onto the span of `spanning` (any spanning set).
pub fn project_onto_span(spanning: &[RVec], x: &RVec) -> RVec {
    let dim = x.dim();
    let basis = independent_subset(spanning, dim);
    if basis.is_empty() {
        return RVec::zeros(dim);
    }
    let gram: Vec<RVec> = basis
        .iter()
        .map(|u| basis.iter().map(|v| u.dot(v)).collect())
        .collect();
    let rhs: Vec<Scalar> = basis.iter().map(|u| u.dot(x)).collect();
    let coeffs = solve_unique(&gram, &rhs).expect("Gram matrix of an independent set is nonsingular");
    basis
        .iter()
        .zip(coeffs.iter())
        .fold(RVec::zeros(dim), |acc, (u, c)| acc.axpy(c, u))
}

/// Transpose of a list of rows with `ncols` columns.
pub fn transpose(rows: &[RVec], ncols: usize) -> Vec<RVec> {
    (0..ncols)
        .map(|c| rows.iter().map(|r| r[c].clone()).collect())
        .collect()
}

pub fn mat_vec(rows: &[RVec], x: &RVec) -> RVec {
    rows.iter().map(|r| r.dot(x)).collect()
}

pub fn identity(n: usize) -> Vec<RVec> {
    (0..n).map(|i| RVec::unit(n, i)).collect()
}
