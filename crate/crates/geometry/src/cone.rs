//! Polyhedral convex cones carried in both representations, and finite unions of them.

use num::{Signed, Zero};
use serde::Serialize;

use crate::caps::Caps;
use crate::dd::{cone_generators, ConeGens};
use crate::error::{GeometryError, Result};
use crate::linalg::rank;
use crate::lp::cone_hull_contains;
use crate::scalar::RVec;

/// A polyhedral convex cone.
///
/// `gens` is the canonical V-side. `polar` holds the canonical generators of the
/// polar cone `{c : <c, x> <= 0 for all x in K}`; its rays are the facet normals
/// (`<c, x> <= 0`) and its lineality basis spans the implicit equations of `K`.
/// Both sides are produced by the double description method at construction, so
/// they always describe the same set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyCone {
    gens: ConeGens,
    polar: ConeGens,
}

fn check_dim(dim: usize) -> Result<()> {
    Caps::check("cone dimension", dim, Caps::current().max_dim)
}

fn check_len(vs: &[RVec], dim: usize) -> Result<()> {
    for v in vs {
        if v.dim() != dim {
            return Err(GeometryError::DimMismatch {
                expected: dim,
                actual: v.dim(),
            });
        }
    }
    Ok(())
}

impl PolyCone {
    /// `cone(rays) + span(lineality)`.
    pub fn from_generators(dim: usize, rays: &[RVec], lineality: &[RVec]) -> Result<Self> {
        check_dim(dim)?;
        check_len(rays, dim)?;
        check_len(lineality, dim)?;
        let polar = cone_generators(dim, rays, lineality);
        let gens = cone_generators(dim, &polar.rays, &polar.lineality);
        Ok(PolyCone { gens, polar })
    }

    /// `{x : <c, x> <= 0 for c in ineqs, <e, x> = 0 for e in eqs}`.
    pub fn from_halfspaces(dim: usize, ineqs: &[RVec], eqs: &[RVec]) -> Result<Self> {
        check_dim(dim)?;
        check_len(ineqs, dim)?;
        check_len(eqs, dim)?;
        let gens = cone_generators(dim, ineqs, eqs);
        let polar = cone_generators(dim, &gens.rays, &gens.lineality);
        Ok(PolyCone { gens, polar })
    }

    pub fn zero(dim: usize) -> Self {
        PolyCone {
            gens: ConeGens::zero(dim),
            polar: ConeGens::canonical(dim, &crate::linalg::identity(dim), &[]),
        }
    }

    pub fn whole(dim: usize) -> Self {
        PolyCone::zero(dim).polar()
    }

    /// Subspace spanned by `basis`.
    pub fn subspace(dim: usize, basis: &[RVec]) -> Result<Self> {
        Self::from_generators(dim, &[], basis)
    }

    pub fn dim(&self) -> usize {
        self.gens.dim
    }

    pub fn generators(&self) -> &ConeGens {
        &self.gens
    }

    /// Extreme rays of the pointed part (modulo the lineality space).
    pub fn rays(&self) -> &[RVec] {
        &self.gens.rays
    }

    pub fn lineality_basis(&self) -> &[RVec] {
        &self.gens.lineality
    }

    /// Facet normals `c` with `<c, x> <= 0` on the cone.
    pub fn halfspaces(&self) -> &[RVec] {
        &self.polar.rays
    }

    /// Normals `e` with `<e, x> = 0` on the cone.
    pub fn equations(&self) -> &[RVec] {
        &self.polar.lineality
    }

    pub fn polar(&self) -> PolyCone {
        PolyCone {
            gens: self.polar.clone(),
            polar: self.gens.clone(),
        }
    }

    pub fn contains(&self, x: &RVec) -> bool {
        self.polar.rays.iter().all(|c| !c.dot(x).is_positive())
            && self.polar.lineality.iter().all(|e| e.dot(x).is_zero())
    }

    /// Membership in the relative interior: equations hold and every facet is strict.
    pub fn ri_contains(&self, x: &RVec) -> bool {
        self.polar.rays.iter().all(|c| c.dot(x).is_negative())
            && self.polar.lineality.iter().all(|e| e.dot(x).is_zero())
    }

    /// True iff the cone equals its lineality space.
    pub fn is_subspace(&self) -> bool {
        self.gens.rays.iter().all(|r| self.contains(&r.neg()))
    }

    pub fn is_zero(&self) -> bool {
        self.gens.rays.is_empty() && self.gens.lineality.is_empty()
    }

    /// Dimension of the linear span.
    pub fn span_dim(&self) -> usize {
        self.gens.span_dim()
    }

    /// Basis of the span `K - K`.
    pub fn span_basis(&self) -> Vec<RVec> {
        let all: Vec<RVec> = self.gens.lineality.iter().chain(&self.gens.rays).cloned().collect();
        crate::linalg::rref(&all, self.dim()).0
    }

    /// Sum of the extreme rays: a point of the relative interior.
    pub fn relative_interior_point(&self) -> RVec {
        self.gens
            .rays
            .iter()
            .fold(RVec::zeros(self.dim()), |acc, r| acc.add(r))
    }

    pub fn is_subset_of(&self, other: &PolyCone) -> bool {
        self.gens.rays.iter().all(|r| other.contains(r))
            && self
                .gens
                .lineality
                .iter()
                .all(|l| other.contains(l) && other.contains(&l.neg()))
    }

    pub fn set_eq(&self, other: &PolyCone) -> bool {
        self.gens == other.gens
    }

    pub fn negate(&self) -> PolyCone {
        let neg = |g: &ConeGens| {
            let rays: Vec<RVec> = g.rays.iter().map(RVec::neg).collect();
            ConeGens::canonical(g.dim, &g.lineality, &rays)
        };
        PolyCone {
            gens: neg(&self.gens),
            polar: neg(&self.polar),
        }
    }

    /// Minkowski sum `self + other`.
    pub fn sum(&self, other: &PolyCone) -> Result<PolyCone> {
        let rays: Vec<RVec> = self.gens.rays.iter().chain(&other.gens.rays).cloned().collect();
        let lin: Vec<RVec> = self
            .gens
            .lineality
            .iter()
            .chain(&other.gens.lineality)
            .cloned()
            .collect();
        PolyCone::from_generators(self.dim(), &rays, &lin)
    }

    /// `self - other = self + (-other)`, a convex cone.
    pub fn difference(&self, other: &PolyCone) -> Result<PolyCone> {
        self.sum(&other.negate())
    }

    pub fn intersect(&self, other: &PolyCone) -> Result<PolyCone> {
        let ineqs: Vec<RVec> = self.halfspaces().iter().chain(other.halfspaces()).cloned().collect();
        let eqs: Vec<RVec> = self.equations().iter().chain(other.equations()).cloned().collect();
        PolyCone::from_halfspaces(self.dim(), &ineqs, &eqs)
    }

    /// Intersection with the hyperplane `<v, x> = 0`.
    pub fn intersect_hyperplane(&self, v: &RVec) -> Result<PolyCone> {
        let mut eqs = self.equations().to_vec();
        eqs.push(v.clone());
        PolyCone::from_halfspaces(self.dim(), self.halfspaces(), &eqs)
    }

    /// Product cone `self x other` in the concatenated space.
    pub fn product(&self, other: &PolyCone) -> PolyCone {
        fn prod(a: &ConeGens, b: &ConeGens) -> ConeGens {
            let za = RVec::zeros(a.dim);
            let zb = RVec::zeros(b.dim);
            let lin: Vec<RVec> = a
                .lineality
                .iter()
                .map(|l| l.concat(&zb))
                .chain(b.lineality.iter().map(|l| za.concat(l)))
                .collect();
            let rays: Vec<RVec> = a
                .rays
                .iter()
                .map(|r| r.concat(&zb))
                .chain(b.rays.iter().map(|r| za.concat(r)))
                .collect();
            ConeGens::canonical(a.dim + b.dim, &lin, &rays)
        }
        PolyCone {
            gens: prod(&self.gens, &other.gens),
            polar: prod(&self.polar, &other.polar),
        }
    }

    /// Membership in `self - other`, decided by LP feasibility over the generators
    /// without forming the difference.
    pub fn minkowski_diff_contains(&self, other: &PolyCone, q: &RVec) -> bool {
        let rays: Vec<RVec> = self
            .gens
            .rays
            .iter()
            .cloned()
            .chain(other.gens.rays.iter().map(RVec::neg))
            .collect();
        let lin: Vec<RVec> = self
            .gens
            .lineality
            .iter()
            .chain(&other.gens.lineality)
            .cloned()
            .collect();
        cone_hull_contains(&rays, &lin, q)
    }

    /// Orthogonal complement of the span intersected with the polar: `K* ∩ F^⊥`
    /// for a face `F` of `K` (the conjugate face).
    pub fn conjugate_face(&self, face: &PolyCone) -> Result<PolyCone> {
        let polar = self.polar();
        let mut all_eqs = polar.equations().to_vec();
        all_eqs.extend(face.span_basis());
        PolyCone::from_halfspaces(self.dim(), polar.halfspaces(), &all_eqs)
    }

    /// H-side for reports: facet normals and equations.
    pub fn h_rep(&self) -> ConeHRep {
        ConeHRep {
            halfspaces: self.halfspaces().to_vec(),
            equations: self.equations().to_vec(),
        }
    }

    /// Rank of a set of vectors restricted to this cone's ambient space.
    pub fn rank_of(&self, vs: &[RVec]) -> usize {
        rank(vs, self.dim())
    }
}

/// Serializable H-representation of a cone.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConeHRep {
    /// `<c, x> <= 0`
    pub halfspaces: Vec<RVec>,
    /// `<e, x> = 0`
    pub equations: Vec<RVec>,
}

/// A finite union of polyhedral cones, canonicalized so that no piece is
/// contained in another and pieces are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeUnion {
    dim: usize,
    pieces: Vec<PolyCone>,
}

impl ConeUnion {
    pub fn new(dim: usize, pieces: Vec<PolyCone>) -> Self {
        let mut pieces = pieces;
        pieces.sort();
        pieces.dedup_by(|a, b| a.set_eq(b));
        let mut keep: Vec<PolyCone> = Vec::new();
        for (i, p) in pieces.iter().enumerate() {
            let dominated = pieces
                .iter()
                .enumerate()
                .any(|(j, q)| j != i && p.is_subset_of(q) && !q.set_eq(p));
            if !dominated {
                keep.push(p.clone());
            }
        }
        ConeUnion { dim, pieces: keep }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[PolyCone] {
        &self.pieces
    }

    pub fn contains(&self, x: &RVec) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    /// Exact test of `cone ⊆ union`.
    pub fn covers(&self, cone: &PolyCone) -> Result<bool> {
        covered_by(cone, &self.pieces)
    }

    pub fn is_subset_of(&self, other: &ConeUnion) -> Result<bool> {
        for p in &self.pieces {
            if !other.covers(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn set_eq(&self, other: &ConeUnion) -> Result<bool> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }
}

/// Decides whether a convex cone is covered by a finite union of convex cones.
///
/// If some piece contains the cone we are done. Otherwise pick a piece whose
/// intersection with the cone has full dimension; the part of the cone not in
/// that piece lies in the union of the closed sub-cones `cone ∩ {<c, x> >= 0}`
/// over the piece's facets `c`, each of which meets the piece in lower
/// dimension, and those are checked recursively. If no piece meets the cone in
/// full dimension, the union of lower-dimensional sets cannot cover it.
pub fn covered_by(cone: &PolyCone, pieces: &[PolyCone]) -> Result<bool> {
    if pieces.iter().any(|p| cone.is_subset_of(p)) {
        return Ok(true);
    }
    let d = cone.span_dim();
    if d == 0 {
        return Ok(pieces.iter().any(|p| p.contains(&RVec::zeros(cone.dim()))));
    }
    let mut full = None;
    for (k, p) in pieces.iter().enumerate() {
        let inter = cone.intersect(p)?;
        if inter.span_dim() == d {
            full = Some(k);
            break;
        }
    }
    let Some(k) = full else {
        return Ok(false);
    };
    let piece = &pieces[k];
    for c in piece.halfspaces() {
        // facets that are nonpositive on the whole cone cannot separate points from the piece
        if cone.generators().all_directions().iter().all(|g| !c.dot(g).is_positive()) {
            continue;
        }
        let mut ineqs = cone.halfspaces().to_vec();
        ineqs.push(c.neg());
        let part = PolyCone::from_halfspaces(cone.dim(), &ineqs, cone.equations())?;
        if !covered_by(&part, pieces)? {
            return Ok(false);
        }
    }
    Ok(true)
}
