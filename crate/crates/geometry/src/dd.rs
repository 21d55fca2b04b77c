//! Double description: generators of `{y : <a, y> <= 0, <e, y> = 0}` by
//! incremental constraint insertion.
//!
//! The cone is carried as `span(lineality) + cone(rays)`. A constraint that is
//! not orthogonal to the current lineality space cuts it down by one dimension;
//! otherwise rays are split into positive, zero and negative sides and adjacent
//! positive/negative pairs are combined. Adjacency uses the algebraic test: the
//! rows tight at both rays have rank `d - dim(lineality) - 2`.

use num::{Signed, Zero};

use crate::linalg::{nullspace, rank, rref, solve_unique};
use crate::scalar::{RVec, Scalar};

/// Generators of a polyhedral cone in canonical form.
///
/// `lineality` is a reduced row echelon basis of the lineality space; `rays`
/// are the extreme rays of the pointed part, orthogonally projected onto the
/// complement of the lineality space, scaled to primitive integer vectors and
/// sorted. Two cones are equal as sets iff their canonical generators are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConeGens {
    pub dim: usize,
    pub lineality: Vec<RVec>,
    pub rays: Vec<RVec>,
}

impl ConeGens {
    pub fn zero(dim: usize) -> Self {
        ConeGens {
            dim,
            lineality: Vec::new(),
            rays: Vec::new(),
        }
    }

    /// Canonical form of `span(lineality) + cone(rays)` when `rays` are already
    /// known to be extreme modulo the lineality space (or to contain only
    /// redundant copies of extreme rays).
    pub fn canonical(dim: usize, lineality: &[RVec], rays: &[RVec]) -> Self {
        let (lin, _) = rref(lineality, dim);
        let mut out: Vec<RVec> = rays
            .iter()
            .map(|r| project_off(&lin, r).primitive())
            .filter(|r| !r.is_zero())
            .collect();
        out.sort();
        out.dedup();
        ConeGens {
            dim,
            lineality: lin,
            rays: out,
        }
    }

    /// Dimension of the linear span.
    pub fn span_dim(&self) -> usize {
        let all: Vec<RVec> = self.lineality.iter().chain(&self.rays).cloned().collect();
        rank(&all, self.dim)
    }

    /// All generators, lineality directions in both orientations.
    pub fn all_directions(&self) -> Vec<RVec> {
        let mut out = self.rays.clone();
        for l in &self.lineality {
            out.push(l.clone());
            out.push(l.neg());
        }
        out
    }
}

/// Component of `x` orthogonal to the span of the rows of `lin`.
pub(crate) fn project_off(lin: &[RVec], x: &RVec) -> RVec {
    if lin.is_empty() {
        return x.clone();
    }
    let gram: Vec<RVec> = lin
        .iter()
        .map(|u| lin.iter().map(|v| u.dot(v)).collect())
        .collect();
    let rhs: Vec<Scalar> = lin.iter().map(|u| u.dot(x)).collect();
    let c = solve_unique(&gram, &rhs).expect("lineality basis is independent");
    lin.iter()
        .zip(c.iter())
        .fold(x.clone(), |acc, (u, k)| acc.axpy(&-k.clone(), u))
}

/// Generators of `{y in R^dim : <a, y> <= 0 for a in ineqs, <e, y> = 0 for e in eqs}`.
pub fn cone_generators(dim: usize, ineqs: &[RVec], eqs: &[RVec]) -> ConeGens {
    // Equalities restrict to a subspace up front: start from its basis.
    let mut lineality = nullspace(eqs, dim);
    let mut rays: Vec<RVec> = Vec::new();
    let mut processed: Vec<RVec> = eqs.to_vec();

    for a in ineqs {
        if a.is_zero() {
            continue;
        }
        if let Some(k) = lineality.iter().position(|l| !a.dot(l).is_zero()) {
            let l0 = lineality.remove(k);
            let s0 = a.dot(&l0);
            for l in lineality.iter_mut() {
                let s = a.dot(l);
                if !s.is_zero() {
                    *l = l.axpy(&-(s / &s0), &l0);
                }
            }
            for r in rays.iter_mut() {
                let s = a.dot(r);
                if !s.is_zero() {
                    *r = r.axpy(&-(s / &s0), &l0).primitive();
                }
            }
            let new_ray = if s0.is_positive() { l0.neg() } else { l0 };
            rays.push(new_ray.primitive());
            processed.push(a.clone());
            continue;
        }

        let values: Vec<Scalar> = rays.iter().map(|r| a.dot(r)).collect();
        if !values.iter().any(Signed::is_positive) {
            processed.push(a.clone());
            continue;
        }
        let pointed_dim = dim - lineality.len();
        let zero_sets: Vec<Vec<usize>> = rays
            .iter()
            .map(|r| {
                (0..processed.len())
                    .filter(|&i| processed[i].dot(r).is_zero())
                    .collect()
            })
            .collect();
        let mut next: Vec<RVec> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if !values[i].is_positive() {
                next.push(r.clone());
            }
        }
        for (p, rp) in rays.iter().enumerate() {
            if !values[p].is_positive() {
                continue;
            }
            for (n, rn) in rays.iter().enumerate() {
                if !values[n].is_negative() {
                    continue;
                }
                let common: Vec<RVec> = zero_sets[p]
                    .iter()
                    .filter(|i| zero_sets[n].contains(i))
                    .map(|&i| processed[i].clone())
                    .collect();
                if pointed_dim < 2 || common.len() + 2 < pointed_dim {
                    continue;
                }
                if rank(&common, dim) + 2 != pointed_dim {
                    continue;
                }
                let combo = rn.scale(&values[p]).axpy(&-values[n].clone(), rp);
                next.push(combo.primitive());
            }
        }
        next.sort();
        next.dedup();
        rays = next;
        processed.push(a.clone());
    }

    let gens = ConeGens::canonical(dim, &lineality, &rays);
    prune_non_extreme(gens, ineqs, eqs)
}

/// Drops rays whose tight constraint rows do not have full rank; such rays
/// can only arise as duplicates and are redundant.
fn prune_non_extreme(mut gens: ConeGens, ineqs: &[RVec], eqs: &[RVec]) -> ConeGens {
    let pointed_dim = gens.dim - gens.lineality.len();
    let dim = gens.dim;
    gens.rays.retain(|r| {
        let tight: Vec<RVec> = ineqs
            .iter()
            .filter(|a| a.dot(r).is_zero())
            .chain(eqs.iter())
            .cloned()
            .collect();
        rank(&tight, dim) + 1 == pointed_dim
    });
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthant_generators() {
        let g = cone_generators(
            2,
            &[RVec::from_ints(&[-1, 0]), RVec::from_ints(&[0, -1])],
            &[],
        );
        assert!(g.lineality.is_empty());
        assert_eq!(g.rays, vec![RVec::from_ints(&[0, 1]), RVec::from_ints(&[1, 0])]);
    }

    #[test]
    fn halfplane_has_lineality() {
        let g = cone_generators(2, &[RVec::from_ints(&[-1, 1])], &[]);
        assert_eq!(g.lineality.len(), 1);
        assert_eq!(g.rays.len(), 1);
        // the ray is orthogonal to the boundary line w1 = w2
        assert!(g.rays[0].dot(&g.lineality[0]).is_zero());
    }

    #[test]
    fn equality_gives_a_line() {
        let g = cone_generators(2, &[], &[RVec::from_ints(&[1, -1])]);
        assert_eq!(g.lineality, vec![RVec::from_ints(&[1, 1])]);
        assert!(g.rays.is_empty());
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // cone over the square [-1,1]^2 at height 1: |x| <= t, |y| <= t
        let ineqs = [
            RVec::from_ints(&[1, 0, -1]),
            RVec::from_ints(&[-1, 0, -1]),
            RVec::from_ints(&[0, 1, -1]),
            RVec::from_ints(&[0, -1, -1]),
        ];
        let g = cone_generators(3, &ineqs, &[]);
        assert_eq!(g.rays.len(), 4);
        for r in &g.rays {
            assert!(r[0].abs() == r[2] && r[1].abs() == r[2]);
        }
    }

    #[test]
    fn contradictory_constraints_give_origin() {
        let g = cone_generators(1, &[RVec::from_ints(&[1]), RVec::from_ints(&[-1])], &[]);
        assert!(g.rays.is_empty() && g.lineality.is_empty());
    }
}
