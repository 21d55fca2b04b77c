//! Convex polyhedral functions `g(z) = max_j {<a_j, z> - alpha_j} + δ_D(z)` with
//! `D = {z : <b_i, z> <= beta_i}`, and their first-order calculus.

use std::cmp::Ordering;
use std::fmt;

use num::{One, Signed, Zero};
use polyvar_geometry::scalar::serde_scalar;
use polyvar_geometry::{format_scalar, int, HPolyhedron, LinearProgram, RVec, Scalar, VPolyhedron};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};

/// A real number or `+∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extended {
    Finite(Scalar),
    Infinity,
}

impl Extended {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            Extended::Finite(x) => Some(x),
            Extended::Infinity => None,
        }
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinity) => Ordering::Less,
            (Extended::Infinity, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinity, Extended::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => f.write_str(&format_scalar(x)),
            Extended::Infinity => f.write_str("+inf"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub a: RVec,
    #[serde(with = "serde_scalar")]
    pub alpha: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub b: RVec,
    #[serde(with = "serde_scalar")]
    pub beta: Scalar,
}

#[derive(Deserialize)]
struct RawFunc {
    m: usize,
    pieces: Vec<Piece>,
    #[serde(default)]
    constraints: Vec<Constraint>,
}

/// A proper polyhedral function on `R^m`. Redundant pieces are kept as given.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFunc")]
pub struct PolyhedralFunc {
    m: usize,
    pieces: Vec<Piece>,
    constraints: Vec<Constraint>,
}

impl TryFrom<RawFunc> for PolyhedralFunc {
    type Error = Error;

    fn try_from(raw: RawFunc) -> Result<Self> {
        PolyhedralFunc::new(raw.m, raw.pieces, raw.constraints)
    }
}

/// Indices of the pieces attaining the max and of the tight constraints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActiveSets {
    pub pieces: Vec<usize>,
    pub constraints: Vec<usize>,
}

/// `lambda = Σ sigma_j a_j + Σ tau_i b_i` with `sigma` in the simplex over active
/// pieces and `tau >= 0` over tight constraints. Vectors are indexed over all
/// pieces and constraints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub sigma: RVec,
    pub tau: RVec,
}

impl Decomposition {
    /// `J_+`: pieces with positive weight.
    pub fn piece_support(&self) -> Vec<usize> {
        support(&self.sigma)
    }

    /// `I_+`: constraints with positive weight.
    pub fn constraint_support(&self) -> Vec<usize> {
        support(&self.tau)
    }
}

fn support(xs: &[Scalar]) -> Vec<usize> {
    xs.iter()
        .enumerate()
        .filter(|(_, x)| x.is_positive())
        .map(|(i, _)| i)
        .collect()
}

/// All decompositions as a polyhedron: vertices, plus recession directions in
/// `tau` (their `sigma` part is zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionSet {
    pub vertices: Vec<Decomposition>,
    pub rays: Vec<Decomposition>,
}

/// A point of `gph ∂g` with its active sets and subdifferential.
#[derive(Debug, Clone)]
pub struct SubgradientPair {
    pub z: RVec,
    pub lambda: RVec,
    pub active: ActiveSets,
    pub subdifferential: VPolyhedron,
}

impl PolyhedralFunc {
    pub fn new(m: usize, pieces: Vec<Piece>, constraints: Vec<Constraint>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parse("dimension m must be positive".into()));
        }
        if pieces.is_empty() {
            return Err(Error::Parse("at least one affine piece is required".into()));
        }
        for p in &pieces {
            check_dim(m, p.a.dim())?;
        }
        for c in &constraints {
            check_dim(m, c.b.dim())?;
        }
        let g = PolyhedralFunc { m, pieces, constraints };
        if g.domain().is_empty() {
            return Err(Error::Parse("the domain is empty; g must be proper".into()));
        }
        Ok(g)
    }

    /// Shorthand from `(a, alpha)` and `(b, beta)` pairs.
    pub fn from_parts(m: usize, pieces: Vec<(RVec, Scalar)>, constraints: Vec<(RVec, Scalar)>) -> Result<Self> {
        Self::new(
            m,
            pieces.into_iter().map(|(a, alpha)| Piece { a, alpha }).collect(),
            constraints.into_iter().map(|(b, beta)| Constraint { b, beta }).collect(),
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// `|z|` on the real line.
    pub fn abs() -> Self {
        Self::from_parts(1, vec![(RVec::from_ints(&[1]), int(0)), (RVec::from_ints(&[-1]), int(0))], vec![])
            .expect("valid")
    }

    /// `max(z_1, ..., z_m)`.
    pub fn max_of_coordinates(m: usize) -> Self {
        Self::from_parts(m, (0..m).map(|i| (RVec::unit(m, i), int(0))).collect(), vec![]).expect("valid")
    }

    /// Indicator of a nonempty polyhedron. Equalities become pairs of inequalities.
    pub fn indicator(c: &HPolyhedron) -> Result<Self> {
        let mut cons: Vec<(RVec, Scalar)> = c.inequalities.clone();
        for (e, d) in &c.equalities {
            cons.push((e.clone(), d.clone()));
            cons.push((e.neg(), -d.clone()));
        }
        Self::from_parts(c.dim, vec![(RVec::zeros(c.dim), int(0))], cons)
    }

    /// The zero function on `R^m`.
    pub fn zero(m: usize) -> Self {
        Self::from_parts(m, vec![(RVec::zeros(m), int(0))], vec![]).expect("valid")
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn domain(&self) -> HPolyhedron {
        HPolyhedron {
            dim: self.m,
            inequalities: self.constraints.iter().map(|c| (c.b.clone(), c.beta.clone())).collect(),
            equalities: Vec::new(),
        }
    }

    pub fn in_domain(&self, z: &RVec) -> bool {
        self.constraints.iter().all(|c| c.b.dot(z) <= c.beta)
    }

    fn max_piece(&self, z: &RVec) -> Scalar {
        self.pieces
            .iter()
            .map(|p| p.a.dot(z) - &p.alpha)
            .max()
            .expect("at least one piece")
    }

    fn check_member(&self, z: &RVec) -> Result<()> {
        check_dim(self.m, z.dim())?;
        if self.in_domain(z) {
            Ok(())
        } else {
            Err(Error::NotInDomain)
        }
    }

    pub fn eval(&self, z: &RVec) -> Result<Extended> {
        check_dim(self.m, z.dim())?;
        if !self.in_domain(z) {
            return Ok(Extended::Infinity);
        }
        Ok(Extended::Finite(self.max_piece(z)))
    }

    pub fn active_sets(&self, z: &RVec) -> Result<ActiveSets> {
        self.check_member(z)?;
        let top = self.max_piece(z);
        Ok(ActiveSets {
            pieces: (0..self.pieces.len())
                .filter(|&j| self.pieces[j].a.dot(z) - &self.pieces[j].alpha == top)
                .collect(),
            constraints: (0..self.constraints.len())
                .filter(|&i| self.constraints[i].b.dot(z) == self.constraints[i].beta)
                .collect(),
        })
    }

    /// `∂g(z) = conv{a_j : j ∈ J(z)} + cone{b_i : i ∈ I(z)}`.
    pub fn subdifferential(&self, z: &RVec) -> Result<VPolyhedron> {
        let act = self.active_sets(z)?;
        Ok(self.subdifferential_from(&act))
    }

    fn subdifferential_from(&self, act: &ActiveSets) -> VPolyhedron {
        VPolyhedron {
            dim: self.m,
            points: act.pieces.iter().map(|&j| self.pieces[j].a.clone()).collect(),
            rays: act.constraints.iter().map(|&i| self.constraints[i].b.clone()).collect(),
        }
    }

    /// `dg(z)(w)`: `max_{j ∈ J(z)} <a_j, w>` on the tangent cone of the domain,
    /// `+∞` off it.
    pub fn subderivative(&self, z: &RVec, w: &RVec) -> Result<Extended> {
        let act = self.active_sets(z)?;
        check_dim(self.m, w.dim())?;
        if act.constraints.iter().any(|&i| self.constraints[i].b.dot(w).is_positive()) {
            return Ok(Extended::Infinity);
        }
        Ok(Extended::Finite(
            act.pieces.iter().map(|&j| self.pieces[j].a.dot(w)).max().expect("J(z) is nonempty"),
        ))
    }

    /// A rational `r > 0` with `g(z + w) = g(z) + dg(z)(w)` for every `w` in the
    /// tangent cone of the domain with `|w| <= r`.
    ///
    /// An inactive constraint stays inactive while `|b|_1 |w| < slack`; an
    /// inactive piece `j` stays below some active piece `k` while
    /// `|a_j - a_k|_1 |w| <= gap_j`.
    pub fn local_exactness_radius(&self, z: &RVec) -> Result<Scalar> {
        let act = self.active_sets(z)?;
        let top = self.max_piece(z);
        let mut r: Option<Scalar> = None;
        let mut offer = |cand: Scalar| {
            if r.as_ref().map_or(true, |best| cand < *best) {
                r = Some(cand);
            }
        };
        for (i, c) in self.constraints.iter().enumerate() {
            if !act.constraints.contains(&i) && !c.b.is_zero() {
                offer((&c.beta - c.b.dot(z)) / c.b.norm_l1());
            }
        }
        for (j, p) in self.pieces.iter().enumerate() {
            if act.pieces.contains(&j) {
                continue;
            }
            let gap = &top - (p.a.dot(z) - &p.alpha);
            let spread = act
                .pieces
                .iter()
                .map(|&k| p.a.sub(&self.pieces[k].a).norm_l1())
                .min()
                .expect("J(z) is nonempty");
            if !spread.is_zero() {
                offer(gap / spread);
            }
        }
        Ok(r.unwrap_or_else(Scalar::one))
    }

    /// One decomposition of `lambda` over the active sets at `z`, found by a
    /// phase-one simplex; `None` iff `lambda ∉ ∂g(z)`.
    pub fn decompose(&self, z: &RVec, lambda: &RVec) -> Result<Option<Decomposition>> {
        let act = self.active_sets(z)?;
        check_dim(self.m, lambda.dim())?;
        Ok(self.decompose_with(&act, lambda))
    }

    fn decompose_with(&self, act: &ActiveSets, lambda: &RVec) -> Option<Decomposition> {
        let (nj, ni) = (act.pieces.len(), act.constraints.len());
        let mut lp = LinearProgram::new(nj + ni);
        for (row, rhs) in self.decomposition_equations(act, lambda) {
            lp.add_eq(row, rhs);
        }
        let x = lp.feasible_point()?;
        Some(self.spread(act, &x))
    }

    fn decomposition_equations(&self, act: &ActiveSets, lambda: &RVec) -> Vec<(RVec, Scalar)> {
        let nj = act.pieces.len();
        let mut rows: Vec<(RVec, Scalar)> = (0..self.m)
            .map(|k| {
                let row: RVec = act
                    .pieces
                    .iter()
                    .map(|&j| self.pieces[j].a[k].clone())
                    .chain(act.constraints.iter().map(|&i| self.constraints[i].b[k].clone()))
                    .collect();
                (row, lambda[k].clone())
            })
            .collect();
        let ones: RVec = (0..nj + act.constraints.len())
            .map(|k| if k < nj { Scalar::one() } else { Scalar::zero() })
            .collect();
        rows.push((ones, Scalar::one()));
        rows
    }

    fn spread(&self, act: &ActiveSets, x: &RVec) -> Decomposition {
        let mut sigma = RVec::zeros(self.pieces.len());
        let mut tau = RVec::zeros(self.constraints.len());
        for (k, &j) in act.pieces.iter().enumerate() {
            sigma[j] = x[k].clone();
        }
        for (k, &i) in act.constraints.iter().enumerate() {
            tau[i] = x[act.pieces.len() + k].clone();
        }
        Decomposition { sigma, tau }
    }

    /// Every vertex of the decomposition polyhedron, by double description.
    /// Empty iff `lambda ∉ ∂g(z)`.
    pub fn decompose_all(&self, z: &RVec, lambda: &RVec) -> Result<DecompositionSet> {
        let act = self.active_sets(z)?;
        check_dim(self.m, lambda.dim())?;
        let n = act.pieces.len() + act.constraints.len();
        let nonneg: Vec<(RVec, Scalar)> = (0..n).map(|k| (RVec::unit(n, k).neg(), Scalar::zero())).collect();
        let h = HPolyhedron::new(n, nonneg, self.decomposition_equations(&act, lambda))?;
        let v = h.to_v()?;
        Ok(DecompositionSet {
            vertices: v.points.iter().map(|p| self.spread(&act, p)).collect(),
            rays: v.rays.iter().map(|r| self.spread(&act, r)).collect(),
        })
    }

    /// Decides `(z, lambda) ∈ gph ∂g`.
    pub fn graph_membership(&self, z: &RVec, lambda: &RVec) -> bool {
        if z.dim() != self.m || lambda.dim() != self.m || !self.in_domain(z) {
            return false;
        }
        matches!(self.decompose(z, lambda), Ok(Some(_)))
    }

    /// Checks `lambda ∈ ∂g(z)` and caches the first-order data.
    pub fn subgradient_pair(&self, z: &RVec, lambda: &RVec) -> Result<SubgradientPair> {
        let active = self.active_sets(z)?;
        check_dim(self.m, lambda.dim())?;
        if self.decompose_with(&active, lambda).is_none() {
            return Err(Error::NotSubgradient);
        }
        Ok(SubgradientPair {
            z: z.clone(),
            lambda: lambda.clone(),
            subdifferential: self.subdifferential_from(&active),
            active,
        })
    }

    /// The conjugate `g*`, read off the generators of the epigraph: each point
    /// `(z_k, t_k)` gives the piece `<z_k, .> - t_k` and each recession
    /// direction `(r, s)` gives the constraint `<r, .> <= s`.
    pub fn conjugate(&self) -> Result<PolyhedralFunc> {
        let m = self.m;
        let mut ineqs: Vec<(RVec, Scalar)> = self
            .pieces
            .iter()
            .map(|p| {
                let mut row = p.a.clone();
                row.push(-Scalar::one());
                (row, p.alpha.clone())
            })
            .collect();
        ineqs.extend(self.constraints.iter().map(|c| {
            let mut row = c.b.clone();
            row.push(Scalar::zero());
            (row, c.beta.clone())
        }));
        let epi = HPolyhedron::new(m + 1, ineqs, vec![])?.to_v()?;
        let pieces: Vec<(RVec, Scalar)> = epi
            .points
            .iter()
            .map(|p| (p.slice(0, m), p[m].clone()))
            .collect();
        let constraints: Vec<(RVec, Scalar)> = epi
            .rays
            .iter()
            .map(|r| (r.slice(0, m), r[m].clone()))
            .filter(|(b, _)| !b.is_zero())
            .collect();
        PolyhedralFunc::from_parts(m, pieces, constraints)
    }
}

impl fmt::Display for PolyhedralFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "max{{")?;
        for (k, p) in self.pieces.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "<{}, z> - {}", p.a, format_scalar(&p.alpha))?;
        }
        write!(f, "}}")?;
        for c in &self.constraints {
            write!(f, " s.t. <{}, z> <= {}", c.b, format_scalar(&c.beta))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use polyvar_geometry::frac;

    fn v(xs: &[i64]) -> RVec {
        RVec::from_ints(xs)
    }

    fn nonneg_orthant(m: usize) -> PolyhedralFunc {
        PolyhedralFunc::from_parts(
            m,
            vec![(RVec::zeros(m), int(0))],
            (0..m).map(|i| (RVec::unit(m, i).neg(), int(0))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn evaluation() {
        assert_eq!(PolyhedralFunc::abs().eval(&v(&[-3])).unwrap(), Extended::Finite(int(3)));
        assert_eq!(nonneg_orthant(1).eval(&v(&[-1])).unwrap(), Extended::Infinity);
        assert_eq!(
            PolyhedralFunc::max_of_coordinates(2).eval(&v(&[2, 5])).unwrap(),
            Extended::Finite(int(5))
        );
        assert!(matches!(PolyhedralFunc::abs().eval(&v(&[1, 2])), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn active_set_examples() {
        let abs = PolyhedralFunc::abs();
        assert_eq!(abs.active_sets(&v(&[0])).unwrap().pieces, vec![0, 1]);
        assert_eq!(abs.active_sets(&v(&[2])).unwrap().pieces, vec![0]);
        let act = nonneg_orthant(2).active_sets(&v(&[0, 3])).unwrap();
        assert_eq!((act.pieces, act.constraints), (vec![0], vec![0]));
        assert_eq!(nonneg_orthant(1).active_sets(&v(&[-1])), Err(Error::NotInDomain));
    }

    #[test]
    fn subdifferential_examples() {
        let s = PolyhedralFunc::abs().subdifferential(&v(&[0])).unwrap();
        assert!(s.contains(&v(&[1])) && s.contains(&v(&[-1])) && !s.contains(&v(&[2])));
        let s = PolyhedralFunc::max_of_coordinates(2).subdifferential(&v(&[0, 0])).unwrap();
        assert_eq!(s.points, vec![v(&[1, 0]), v(&[0, 1])]);
        let s = nonneg_orthant(2).subdifferential(&v(&[0, 0])).unwrap();
        assert_eq!(s.rays, vec![v(&[-1, 0]), v(&[0, -1])]);
    }

    #[test]
    fn subderivative_examples() {
        let abs = PolyhedralFunc::abs();
        assert_eq!(abs.subderivative(&v(&[0]), &v(&[-2])).unwrap(), Extended::Finite(int(2)));
        assert_eq!(nonneg_orthant(1).subderivative(&v(&[0]), &v(&[-1])).unwrap(), Extended::Infinity);
        let mx = PolyhedralFunc::max_of_coordinates(2);
        assert_eq!(mx.subderivative(&v(&[0, 0]), &v(&[1, 3])).unwrap(), Extended::Finite(int(3)));
    }

    #[test]
    fn exactness_radius_examples() {
        let abs = PolyhedralFunc::abs();
        assert_eq!(abs.local_exactness_radius(&v(&[0])).unwrap(), int(1));
        assert_eq!(abs.local_exactness_radius(&v(&[1])).unwrap(), int(1));
        let unit = PolyhedralFunc::from_parts(
            1,
            vec![(v(&[0]), int(0))],
            vec![(v(&[1]), int(1)), (v(&[-1]), int(0))],
        )
        .unwrap();
        assert_eq!(unit.local_exactness_radius(&v(&[1])).unwrap(), int(1));
    }

    #[test]
    fn decomposition_examples() {
        let abs = PolyhedralFunc::abs();
        let d = abs.decompose(&v(&[0]), &v(&[0])).unwrap().unwrap();
        assert_eq!(d.sigma, RVec::new(vec![frac(1, 2), frac(1, 2)]));
        assert!(abs.decompose(&v(&[0]), &v(&[2])).unwrap().is_none());
        let d = nonneg_orthant(2).decompose(&v(&[0, 0]), &v(&[-1, 0])).unwrap().unwrap();
        assert_eq!(d.tau, v(&[1, 0]));
        assert_eq!(d.sigma, v(&[1]));
        let all = abs.decompose_all(&v(&[0]), &v(&[0])).unwrap();
        assert_eq!(all.vertices, vec![d_abs_half()]);
        assert!(all.rays.is_empty());
    }

    fn d_abs_half() -> Decomposition {
        Decomposition {
            sigma: RVec::new(vec![frac(1, 2), frac(1, 2)]),
            tau: RVec::zeros(0),
        }
    }

    #[test]
    fn decomposition_vertices_of_redundant_pieces() {
        // three copies of the same slope: every vertex puts all weight on one copy
        let g = PolyhedralFunc::from_parts(1, vec![(v(&[1]), int(0)); 3], vec![]).unwrap();
        let all = g.decompose_all(&v(&[0]), &v(&[1])).unwrap();
        assert_eq!(all.vertices.len(), 3);
        for d in &all.vertices {
            assert_eq!(d.piece_support().len(), 1);
        }
    }

    #[test]
    fn graph_membership_examples() {
        let abs = PolyhedralFunc::abs();
        assert!(abs.graph_membership(&v(&[0]), &v(&[1])));
        assert!(!abs.graph_membership(&v(&[1]), &RVec::new(vec![frac(1, 2)])));
        assert!(nonneg_orthant(2).graph_membership(&v(&[0, 0]), &v(&[-3, -4])));
    }

    #[test]
    fn conjugate_examples() {
        let c = PolyhedralFunc::abs().conjugate().unwrap();
        for k in -8..=8 {
            let l = RVec::new(vec![frac(k, 4)]);
            let expected = if k.abs() <= 4 { Extended::Finite(int(0)) } else { Extended::Infinity };
            assert_eq!(c.eval(&l).unwrap(), expected);
        }
        let c = nonneg_orthant(1).conjugate().unwrap();
        assert_eq!(c.eval(&v(&[-2])).unwrap(), Extended::Finite(int(0)));
        assert_eq!(c.eval(&v(&[1])).unwrap(), Extended::Infinity);
        let c = PolyhedralFunc::max_of_coordinates(2).conjugate().unwrap();
        assert_eq!(c.eval(&RVec::new(vec![frac(1, 3), frac(2, 3)])).unwrap(), Extended::Finite(int(0)));
        assert_eq!(c.eval(&v(&[1, 1])).unwrap(), Extended::Infinity);
        assert_eq!(c.eval(&v(&[2, -1])).unwrap(), Extended::Infinity);
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"m": 1, "pieces": [{"a": ["1"], "alpha": "0"}, {"a": [-1], "alpha": 0}]}"#;
        let g = PolyhedralFunc::from_json(text).unwrap();
        assert_eq!(g, PolyhedralFunc::abs());
        let back = PolyhedralFunc::from_json(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
        assert!(PolyhedralFunc::from_json(r#"{"m": 1, "pieces": []}"#).is_err());
        let empty = r#"{"m": 1, "pieces": [{"a": [0], "alpha": 0}], "constraints": [{"b": [1], "beta": -1}, {"b": [-1], "beta": 0}]}"#;
        assert!(PolyhedralFunc::from_json(empty).is_err());
    }
}
