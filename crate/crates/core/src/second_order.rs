//! Critical cones and the second-order objects of a polyhedral function built
//! on them: graphical and strict graphical derivatives, regular and limiting
//! normal cones to the graph of the subdifferential, coderivatives, second
//! subderivatives, and the regularity flags that all reduce to
//! `lambda ∈ ri ∂g(z)`.

use num::{One, Zero};
use polyvar_geometry::scalar::serde_scalar;
use polyvar_geometry::{
    covered_by, face_containing_in_ri, faces, ConeHRep, ConeUnion, PolyCone, RVec, Scalar,
};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::Sampler;
use crate::polyfunc::{Decomposition, Extended, PolyhedralFunc, SubgradientPair};
use crate::prox::prox;

/// `K_g(z, lambda) = {w : <lambda, w> = dg(z)(w)} = N_{∂g(z)}(lambda)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalCone {
    pub z: RVec,
    pub lambda: RVec,
    pub cone: PolyCone,
}

/// The critical cone from one decomposition `(sigma, tau)` of `lambda`:
///
/// ```text
/// <a_i - a_j, w> = 0   for i, j ∈ J+
/// <a_i - a_j, w> <= 0  for i ∈ J(z) \ J+, j ∈ J+
/// <b_i, w> = 0         for i ∈ I+
/// <b_i, w> <= 0        for i ∈ I(z) \ I+
/// ```
pub fn critical_cone_from_decomposition(
    g: &PolyhedralFunc,
    pair: &SubgradientPair,
    d: &Decomposition,
) -> Result<PolyCone> {
    let m = g.dim();
    let a = |j: usize| &g.pieces()[j].a;
    let b = |i: usize| &g.constraints()[i].b;
    let j_plus = d.piece_support();
    let i_plus = d.constraint_support();
    let mut eqs: Vec<RVec> = Vec::new();
    let mut ineqs: Vec<RVec> = Vec::new();
    for &i in &pair.active.pieces {
        for &j in &j_plus {
            if i == j {
                continue;
            }
            let row = a(i).sub(a(j));
            if j_plus.contains(&i) {
                eqs.push(row);
            } else {
                ineqs.push(row);
            }
        }
    }
    for &i in &pair.active.constraints {
        if i_plus.contains(&i) {
            eqs.push(b(i).clone());
        } else {
            ineqs.push(b(i).clone());
        }
    }
    Ok(PolyCone::from_halfspaces(m, &ineqs, &eqs)?)
}

/// The critical cone as the normal cone of `∂g(z)` at `lambda`.
pub fn critical_cone_as_normal_cone(pair: &SubgradientPair) -> Result<PolyCone> {
    let h = pair.subdifferential.to_h()?;
    Ok(h.normal_cone(&pair.lambda)?)
}

/// Builds the critical cone both ways and checks that they agree.
pub fn critical_cone(g: &PolyhedralFunc, z: &RVec, lambda: &RVec) -> Result<CriticalCone> {
    let pair = g.subgradient_pair(z, lambda)?;
    let d = g.decompose(z, lambda)?.ok_or(Error::NotSubgradient)?;
    let cone = critical_cone_from_decomposition(g, &pair, &d)?;
    let normal = critical_cone_as_normal_cone(&pair)?;
    if !cone.set_eq(&normal) {
        return Err(Error::Verification(format!(
            "critical cone from the decomposition differs from N_∂g(z)(lambda) at z = {z}, lambda = {lambda}"
        )));
    }
    Ok(CriticalCone {
        z: z.clone(),
        lambda: lambda.clone(),
        cone,
    })
}

/// `lambda ∈ ri ∂g(z)`, decided by whether the critical cone is a subspace and
/// checked against the relative interior test on `∂g(z)` itself.
pub fn is_ri_subgradient(g: &PolyhedralFunc, z: &RVec, lambda: &RVec) -> Result<bool> {
    let k = critical_cone(g, z, lambda)?;
    let by_cone = k.cone.is_subspace();
    let by_polyhedron = g.subdifferential(z)?.ri_contains(lambda)?;
    if by_cone != by_polyhedron {
        return Err(Error::Verification(
            "subspace test of the critical cone disagrees with relative interior membership".into(),
        ));
    }
    Ok(by_cone)
}

/// `(w, u) ∈ gph N_K`.
pub fn in_normal_graph(k: &PolyCone, w: &RVec, u: &RVec) -> bool {
    k.contains(w) && k.polar().contains(u) && u.dot(w).is_zero()
}

/// One tested point of a reduction certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionSample {
    pub w: RVec,
    pub u: RVec,
    /// `(z + w, lambda + u) ∈ gph ∂g`
    pub in_graph: bool,
    /// `(w, u) ∈ gph N_K`
    pub in_normal_graph: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionAttempt {
    #[serde(with = "serde_scalar")]
    pub radius: Scalar,
    pub disagreements: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionCertificate {
    #[serde(with = "serde_scalar")]
    pub radius: Scalar,
    pub attempts: Vec<ReductionAttempt>,
    pub transcript: Vec<ReductionSample>,
}

impl ReductionCertificate {
    pub fn agreements(&self) -> usize {
        self.transcript.iter().filter(|s| s.in_graph == s.in_normal_graph).count()
    }
}

/// Draws a point of `gph N_K` by picking a face `F`, `w ∈ F` and `u ∈ K° ∩ F^⊥`.
pub fn sample_normal_graph(k: &PolyCone, face_list: &[PolyCone], s: &mut Sampler) -> Result<(RVec, RVec)> {
    let f = &face_list[s.index(face_list.len())];
    let w = s.in_cone(f);
    let u = s.in_cone(&k.conjugate_face(f)?);
    Ok((w, u))
}

/// Draws a point of `gph ∂g - (z, lambda)` of norm at most `radius` through the
/// proximal parametrization `x ↦ (prox_g(x), x - prox_g(x))`, which is onto the
/// graph and nonexpansive from `z + lambda`.
pub fn sample_graph_offset(
    g: &PolyhedralFunc,
    z: &RVec,
    lambda: &RVec,
    radius: &Scalar,
    s: &mut Sampler,
) -> Result<(RVec, RVec)> {
    let delta = s.in_l1_ball(g.dim(), radius);
    let x = z.add(lambda).add(&delta);
    let p = prox(g, &Scalar::one(), &x)?;
    Ok((p.y.sub(z), p.v.sub(lambda)))
}

/// Finds a rational `r`, halving from `1/2` down to `2^-20`, such that for
/// `samples` exact rational draws `(w, u)` with `|(w, u)| <= r`
///
/// ```text
/// (z + w, lambda + u) ∈ gph ∂g  ⟺  (w, u) ∈ gph N_K,   K = K_g(z, lambda).
/// ```
///
/// Draws mix points of `gph N_K`, points of the shifted graph of `∂g`, small
/// perturbations of the former, and uniform points of the ball.
pub fn reduction_certify(
    g: &PolyhedralFunc,
    z: &RVec,
    lambda: &RVec,
    samples: usize,
    seed: u64,
) -> Result<ReductionCertificate> {
    let m = g.dim();
    let k = critical_cone(g, z, lambda)?.cone;
    let face_list = faces(&k)?;
    let mut s = Sampler::new(seed, 16);
    let mut radius = Scalar::new(1.into(), 2.into());
    let floor = Scalar::new(1.into(), (1u64 << 20).into());
    let mut attempts = Vec::new();
    while radius >= floor {
        let mut transcript = Vec::with_capacity(samples);
        let mut disagreements = 0;
        let r2 = &radius * &radius;
        while transcript.len() < samples {
            // Normal-graph draws are pushed towards the sphere of radius r,
            // where disagreements first appear.
            let (w, u, shell) = match transcript.len() % 4 {
                0 => {
                    let (w, u) = sample_normal_graph(&k, &face_list, &mut s)?;
                    (w, u, true)
                }
                1 => {
                    let (w, u) = sample_graph_offset(g, z, lambda, &radius, &mut s)?;
                    (w, u, false)
                }
                2 => {
                    let (w, u) = sample_normal_graph(&k, &face_list, &mut s)?;
                    (w.add(&s.vector(m).scale(&Scalar::new(1.into(), 8.into()))), u, true)
                }
                _ => (s.vector(m), s.vector(m), false),
            };
            let wu = w.concat(&u);
            let wu = if shell {
                let f = Scalar::one() - s.nonneg() / Scalar::from_integer(8.into());
                s.scale_to_norm(&wu, &(&radius * f))
            } else {
                let f = s.nonneg();
                s.scale_to_norm(&wu, &(&radius * f))
            };
            if wu.norm_sq() > r2 {
                continue;
            }
            let (w, u) = (wu.slice(0, m), wu.slice(m, 2 * m));
            let in_graph = g.graph_membership(&z.add(&w), &lambda.add(&u));
            let in_normal_graph = in_normal_graph(&k, &w, &u);
            if in_graph != in_normal_graph {
                disagreements += 1;
            }
            transcript.push(ReductionSample {
                w,
                u,
                in_graph,
                in_normal_graph,
            });
        }
        attempts.push(ReductionAttempt {
            radius: radius.clone(),
            disagreements,
        });
        if disagreements == 0 {
            return Ok(ReductionCertificate {
                radius,
                attempts,
                transcript,
            });
        }
        radius /= Scalar::from_integer(2.into());
    }
    Err(Error::CertificationFailed(format!(
        "{} radii tried at z = {z}, lambda = {lambda}",
        attempts.len()
    )))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolarityReport {
    /// `K_g(z, lambda) = K_{g*}(lambda, z)°`
    pub cones_agree: bool,
    /// `lambda ∈ ri ∂g(z) ⟺ z ∈ ri ∂g*(lambda)`
    pub ri_agree: bool,
}

impl PolarityReport {
    pub fn holds(&self) -> bool {
        self.cones_agree && self.ri_agree
    }
}

/// Computes the critical cone of the conjugate at the reversed pair and
/// compares its polar, and the two relative interior flags.
pub fn polarity_check(g: &PolyhedralFunc, z: &RVec, lambda: &RVec) -> Result<PolarityReport> {
    let k = critical_cone(g, z, lambda)?.cone;
    let conj = g.conjugate()?;
    let k_conj = critical_cone(&conj, lambda, z)?.cone;
    Ok(PolarityReport {
        cones_agree: k.set_eq(&k_conj.polar()),
        ri_agree: is_ri_subgradient(g, z, lambda)? == is_ri_subgradient(&conj, lambda, z)?,
    })
}

/// Faces `F₂ ⊆ F₁` of the base critical cone describing a nearby one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacePair {
    pub f1: PolyCone,
    pub f2: PolyCone,
    /// `K_g(z, lambda) = F₁ - F₂`
    pub critical_cone: PolyCone,
}

/// For `(z, lambda)` near `(zbar, lambdabar)` on the graph: `F₁ = K ∩ [lambda - lambdabar]^⊥`
/// and `F₂` the face with `z - zbar` in its relative interior. Checks
/// `K_g(z, lambda) = F₁ - F₂` and `K ∩ -K ⊆ K_g(z, lambda) ⊆ K - K`.
///
/// Fails with `OutOfRadius` when the offset is not in `gph N_K` or the
/// identities fail; both only happen outside the reduction neighborhood.
pub fn nearby_face_pair(
    g: &PolyhedralFunc,
    zbar: &RVec,
    lambdabar: &RVec,
    z: &RVec,
    lambda: &RVec,
) -> Result<FacePair> {
    let k = critical_cone(g, zbar, lambdabar)?.cone;
    g.subgradient_pair(z, lambda)?;
    let (w, u) = (z.sub(zbar), lambda.sub(lambdabar));
    if !in_normal_graph(&k, &w, &u) {
        return Err(Error::OutOfRadius);
    }
    let f1 = k.intersect_hyperplane(&u)?;
    let f2 = face_containing_in_ri(&k, &w)?.ok_or(Error::OutOfRadius)?;
    let near = critical_cone(g, z, lambda)?.cone;
    let lineality = PolyCone::subspace(k.dim(), k.lineality_basis())?;
    let span = k.difference(&k)?;
    if !near.set_eq(&f1.difference(&f2)?) || !lineality.is_subset_of(&near) || !near.is_subset_of(&span) {
        return Err(Error::OutOfRadius);
    }
    Ok(FacePair {
        f1,
        f2,
        critical_cone: near,
    })
}

/// Realizes a face pair: `u ∈ ri(K° ∩ F₁^⊥)` and `w ∈ ri F₂`, each of l1 norm
/// `r/4`, give `(z + w, lambda + u)` with critical cone `F₁ - F₂`.
pub fn face_pair_witness(
    g: &PolyhedralFunc,
    z: &RVec,
    lambda: &RVec,
    f1: &PolyCone,
    f2: &PolyCone,
    r: &Scalar,
) -> Result<(RVec, RVec)> {
    let k = critical_cone(g, z, lambda)?.cone;
    let face_list = faces(&k)?;
    let is_face = |f: &PolyCone| face_list.iter().any(|h| h.set_eq(f));
    if !is_face(f1) || !is_face(f2) || !f2.is_subset_of(f1) {
        return Err(Error::NotAFacePair);
    }
    let quarter = r / Scalar::from_integer(4.into());
    let shrink = |v: RVec| {
        if v.is_zero() {
            v
        } else {
            let n = v.norm_l1();
            v.scale(&(&quarter / n))
        }
    };
    let u = shrink(k.conjugate_face(f1)?.relative_interior_point());
    let w = shrink(f2.relative_interior_point());
    let (z2, l2) = (z.add(&w), lambda.add(&u));
    if !g.graph_membership(&z2, &l2) {
        return Err(Error::OutOfRadius);
    }
    let near = critical_cone(g, &z2, &l2)?.cone;
    if !near.set_eq(&f1.difference(f2)?) {
        return Err(Error::OutOfRadius);
    }
    Ok((z2, l2))
}

/// `gph N_K` as the union of `F × (K° ∩ F^⊥)` over the faces `F` of `K`.
#[derive(Debug, Clone)]
pub struct GraphDerivativeRep {
    pub k: PolyCone,
    pub faces: Vec<PolyCone>,
    pub pieces: Vec<PolyCone>,
}

impl GraphDerivativeRep {
    pub fn new(k: PolyCone) -> Result<Self> {
        let face_list = faces(&k)?;
        let pieces = face_list
            .iter()
            .map(|f| Ok(f.product(&k.conjugate_face(f)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(GraphDerivativeRep {
            k,
            faces: face_list,
            pieces,
        })
    }

    pub fn contains(&self, w: &RVec, u: &RVec) -> bool {
        in_normal_graph(&self.k, w, u)
    }

    /// Membership in `gph N_K - gph N_K`, one exact feasibility problem per
    /// ordered pair of pieces.
    pub fn difference_contains(&self, w: &RVec, u: &RVec) -> bool {
        let q = w.concat(u);
        self.pieces
            .iter()
            .any(|p| self.pieces.iter().any(|s| p.minkowski_diff_contains(s, &q)))
    }

    /// The convex pieces `P - Q` of `gph N_K - gph N_K`.
    pub fn difference_pieces(&self) -> Result<Vec<PolyCone>> {
        let mut out = Vec::new();
        for p in &self.pieces {
            for s in &self.pieces {
                out.push(p.difference(s)?);
            }
        }
        Ok(out)
    }
}

/// `(w, u) ∈ gph D(∂g)(z, lambda) = gph N_K`.
pub fn graphical_derivative_membership(
    g: &PolyhedralFunc,
    z: &RVec,
    lambda: &RVec,
    w: &RVec,
    u: &RVec,
) -> Result<bool> {
    let k = critical_cone(g, z, lambda)?.cone;
    Ok(in_normal_graph(&k, w, u))
}

/// `(w, u) ∈ gph D_*(∂g)(z, lambda) = gph N_K - gph N_K`.
pub fn strict_graphical_derivative_membership(
    g: &PolyhedralFunc,
    z: &RVec,
    lambda: &RVec,
    w: &RVec,
    u: &RVec,
) -> Result<bool> {
    let rep = GraphDerivativeRep::new(critical_cone(g, z, lambda)?.cone)?;
    Ok(rep.difference_contains(w, u))
}

/// `K° × K`.
pub fn regular_normal_cone(g: &PolyhedralFunc, z: &RVec, lambda: &RVec) -> Result<PolyCone> {
    let k = critical_cone(g, z, lambda)?.cone;
    Ok(k.polar().product(&k))
}

/// The cones `F₁ - F₂` over nested face pairs `F₂ ⊆ F₁` of `K`.
pub fn face_pair_differences(k: &PolyCone) -> Result<Vec<PolyCone>> {
    let face_list = faces(k)?;
    let mut out = Vec::new();
    for f1 in &face_list {
        for f2 in &face_list {
            if f2.is_subset_of(f1) {
                out.push(f1.difference(f2)?);
            }
        }
    }
    Ok(out)
}

/// `∪ (F₁ - F₂)° × (F₁ - F₂)` over face pairs `F₂ ⊆ F₁` of `K`.
pub fn limiting_normal_cone(g: &PolyhedralFunc, z: &RVec, lambda: &RVec) -> Result<ConeUnion> {
    let k = critical_cone(g, z, lambda)?.cone;
    limiting_normal_cone_of(&k)
}

pub fn limiting_normal_cone_of(k: &PolyCone) -> Result<ConeUnion> {
    let pieces: Vec<PolyCone> = face_pair_differences(k)?.iter().map(|q| q.polar().product(q)).collect();
    Ok(ConeUnion::new(2 * k.dim(), pieces))
}

/// `u ∈ D*(∂g)(z, lambda)(w) ⟺ (u, -w) ∈ N_{gph ∂g}(z, lambda)`.
pub fn coderivative_membership(g: &PolyhedralFunc, z: &RVec, lambda: &RVec, w: &RVec, u: &RVec) -> Result<bool> {
    Ok(limiting_normal_cone(g, z, lambda)?.contains(&u.concat(&w.neg())))
}

/// `d²g(z, lambda)(w) = δ_K(w)`.
pub fn second_subderivative(g: &PolyhedralFunc, z: &RVec, lambda: &RVec, w: &RVec) -> Result<Extended> {
    let k = critical_cone(g, z, lambda)?.cone;
    Ok(indicator_value(k.contains(w)))
}

/// `d²_s g(z, lambda)(w) = δ_{K - K}(w)`.
pub fn strict_second_subderivative(g: &PolyhedralFunc, z: &RVec, lambda: &RVec, w: &RVec) -> Result<Extended> {
    let k = critical_cone(g, z, lambda)?.cone;
    Ok(indicator_value(k.minkowski_diff_contains(&k, w)))
}

fn indicator_value(member: bool) -> Extended {
    if member {
        Extended::Finite(Scalar::zero())
    } else {
        Extended::Infinity
    }
}

/// Five properties that the theory says coincide, each decided by its own test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityReport {
    /// `K` is a subspace.
    pub ri: bool,
    /// Limiting and regular normal cones to the graph coincide.
    pub graph_regular: bool,
    /// `gph N_K - gph N_K ⊆ gph N_K`.
    pub strict_proto: bool,
    /// `K - K ⊆ K`, so the strict and ordinary second subderivatives coincide.
    pub strict_twice_epi: bool,
    /// The coderivative graph `∪ (-Q) × Q°` equals `gph N_K`.
    pub coderiv_eq_deriv: bool,
    pub critical_cone: ConeHRep,
}

impl RegularityReport {
    pub fn flags(&self) -> [bool; 5] {
        [
            self.ri,
            self.graph_regular,
            self.strict_proto,
            self.strict_twice_epi,
            self.coderiv_eq_deriv,
        ]
    }

    pub fn consistent(&self) -> bool {
        self.flags().iter().all(|&f| f == self.ri)
    }
}

pub fn regularity_report(g: &PolyhedralFunc, z: &RVec, lambda: &RVec) -> Result<RegularityReport> {
    let k = critical_cone(g, z, lambda)?.cone;
    let ri = is_ri_subgradient(g, z, lambda)?;
    let dim = 2 * k.dim();

    let regular = ConeUnion::new(dim, vec![k.polar().product(&k)]);
    let graph_regular = limiting_normal_cone_of(&k)?.set_eq(&regular)?;

    let rep = GraphDerivativeRep::new(k.clone())?;
    let mut strict_proto = true;
    for piece in rep.difference_pieces()? {
        if !covered_by(&piece, &rep.pieces)? {
            strict_proto = false;
            break;
        }
    }

    let strict_twice_epi = k.difference(&k)?.is_subset_of(&k);

    let coderivative_graph: Vec<PolyCone> = face_pair_differences(&k)?
        .iter()
        .map(|q| q.negate().product(&q.polar()))
        .collect();
    let coderiv_eq_deriv = ConeUnion::new(dim, coderivative_graph).set_eq(&ConeUnion::new(dim, rep.pieces.clone()))?;

    Ok(RegularityReport {
        ri,
        graph_regular,
        strict_proto,
        strict_twice_epi,
        coderiv_eq_deriv,
        critical_cone: k.h_rep(),
    })
}
