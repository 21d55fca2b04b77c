//! Proximal mapping and Moreau envelope of a polyhedral function, computed
//! exactly, and the smoothness classification of the proximal mapping.

use num::{One, Signed, Zero};
use polyvar_geometry::linalg::{identity, solve_unique, transpose};
use polyvar_geometry::scalar::serde_scalar;
use polyvar_geometry::{project, Caps, HPolyhedron, PolyCone, RVec, Scalar};
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::polyfunc::{ActiveSets, Extended, PolyhedralFunc};
use crate::second_order::{critical_cone, is_ri_subgradient};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProxResult {
    pub x: RVec,
    #[serde(with = "serde_scalar")]
    pub r: Scalar,
    /// `prox_{rg}(x)`
    pub y: RVec,
    /// `(x - y) / r`, a subgradient of `g` at `y`
    pub v: RVec,
    #[serde(with = "serde_scalar")]
    pub envelope: Scalar,
    pub active: ActiveSets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Smoothness {
    #[serde(rename = "C1_near")]
    C1Near,
    #[serde(rename = "not_C1")]
    NotC1,
}

impl Smoothness {
    pub fn as_str(&self) -> &'static str {
        match self {
            Smoothness::C1Near => "C1_near",
            Smoothness::NotC1 => "not_C1",
        }
    }
}

/// Row-major exact matrix.
pub type RMatrix = Vec<RVec>;

/// Enumerates `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Solves `min_w g(w) + |w - x|^2 / (2r)` through its epigraph form
/// `min t + |w - x|^2 / (2r)` s.t. `<a_j, w> - alpha_j <= t`, `<b_i, w> <= beta_i`.
///
/// Every candidate set of tight rows with independent gradients (at most `m + 1`
/// of them) is tried: substituting `w = x - r(Σ mu_j a_j + Σ nu_i b_i)` leaves a
/// square linear system in `(mu, nu, t)`. A candidate is accepted when the
/// multipliers are nonnegative and `w` is feasible. All accepted candidates must
/// give the same `w`, since the minimizer is unique.
pub fn prox(g: &PolyhedralFunc, r: &Scalar, x: &RVec) -> Result<ProxResult> {
    let m = g.dim();
    check_dim(m, x.dim())?;
    if !r.is_positive() {
        return Err(Error::Parse("the prox parameter r must be positive".into()));
    }
    let pieces = g.pieces();
    let cons = g.constraints();
    let (l, s) = (pieces.len(), cons.len());
    Caps::check("pieces plus constraints", l + s, Caps::current().max_qp_terms)?;

    // gradient rows: pieces first, then constraints
    let grad = |k: usize| -> &RVec {
        if k < l {
            &pieces[k].a
        } else {
            &cons[k - l].b
        }
    };
    let mut found: Option<RVec> = None;
    let mut failure: Option<Error> = None;
    for size in 1..=(m + 1).min(l + s) {
        combinations(l + s, size, |set| {
            if failure.is_some() || set[0] >= l {
                return;
            }
            let n = set.len() + 1;
            let mut rows: Vec<RVec> = Vec::with_capacity(n);
            let mut rhs: Vec<Scalar> = Vec::with_capacity(n);
            for &p in set {
                let mut row: RVec = set.iter().map(|&q| -(r * grad(p).dot(grad(q)))).collect();
                if p < l {
                    row.push(-Scalar::one());
                    rhs.push(&pieces[p].alpha - pieces[p].a.dot(x));
                } else {
                    row.push(Scalar::zero());
                    rhs.push(&cons[p - l].beta - cons[p - l].b.dot(x));
                }
                rows.push(row);
            }
            let mut sum: RVec = set.iter().map(|&p| if p < l { Scalar::one() } else { Scalar::zero() }).collect();
            sum.push(Scalar::zero());
            rows.push(sum);
            rhs.push(Scalar::one());
            let Some(sol) = solve_unique(&rows, &rhs) else {
                return;
            };
            if sol.iter().take(set.len()).any(Signed::is_negative) {
                return;
            }
            let t = &sol[set.len()];
            let w = set
                .iter()
                .zip(sol.iter())
                .fold(x.clone(), |acc, (&p, mult)| acc.axpy(&-(r * mult), grad(p)));
            let feasible = cons.iter().all(|c| c.b.dot(&w) <= c.beta)
                && pieces.iter().all(|p| p.a.dot(&w) - &p.alpha <= *t);
            if !feasible {
                return;
            }
            match &found {
                None => found = Some(w),
                Some(prev) if *prev == w => {}
                Some(prev) => {
                    failure = Some(Error::Verification(format!(
                        "two optimality patterns give different minimizers {prev} and {w}"
                    )))
                }
            }
        });
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let y = found.ok_or_else(|| Error::Verification("no optimality pattern passed".into()))?;
    let v = x.sub(&y).scale(&(Scalar::one() / r));
    let Extended::Finite(gy) = g.eval(&y)? else {
        return Err(Error::Verification("prox point left the domain".into()));
    };
    if !g.graph_membership(&y, &v) {
        return Err(Error::Verification("resolvent identity v ∈ ∂g(y) failed".into()));
    }
    let envelope = gy + x.sub(&y).norm_sq() / (r * Scalar::from_integer(2.into()));
    let active = g.active_sets(&y)?;
    Ok(ProxResult {
        x: x.clone(),
        r: r.clone(),
        y,
        v,
        envelope,
        active,
    })
}

/// `∇e_r g(x) = (x - prox_{rg}(x)) / r`.
pub fn envelope_gradient(g: &PolyhedralFunc, r: &Scalar, x: &RVec) -> Result<RVec> {
    Ok(prox(g, r, x)?.v)
}

/// Directional derivative of the proximal mapping: the projection of `h` onto
/// the critical cone at `(y, v)`.
pub fn prox_directional_derivative(g: &PolyhedralFunc, r: &Scalar, x: &RVec, h: &RVec) -> Result<RVec> {
    check_dim(g.dim(), h.dim())?;
    let p = prox(g, r, x)?;
    let k = critical_cone(g, &p.y, &p.v)?;
    Ok(project(&k.cone, h)?)
}

pub fn smoothness_classify(g: &PolyhedralFunc, r: &Scalar, x: &RVec) -> Result<Smoothness> {
    let p = prox(g, r, x)?;
    Ok(if is_ri_subgradient(g, &p.y, &p.v)? {
        Smoothness::C1Near
    } else {
        Smoothness::NotC1
    })
}

/// Matrix of the orthogonal projection onto a subspace cone.
pub fn projection_matrix(k: &PolyCone) -> Result<RMatrix> {
    let n = k.dim();
    let cols: Vec<RVec> = identity(n).iter().map(|e| project(k, e)).collect::<std::result::Result<_, _>>()?;
    Ok(transpose(&cols, n))
}

/// Jacobian of the proximal mapping and Hessian of the envelope at a point
/// where both are smooth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProxDerivatives {
    pub jacobian: RMatrix,
    pub hessian: RMatrix,
}

/// `∇prox_{rg}(x) = P_K` and `∇²e_r g(x) = (I - P_K) / r`, with `K` the critical
/// cone at `(y, v)`. The Hessian is computed a second time as
/// `P_{K'} / r` with `K'` the critical cone of the conjugate at `(v, y)`, and
/// the two must agree.
pub fn prox_derivatives(g: &PolyhedralFunc, r: &Scalar, x: &RVec) -> Result<ProxDerivatives> {
    let p = prox(g, r, x)?;
    let k = critical_cone(g, &p.y, &p.v)?.cone;
    if !k.is_subspace() {
        return Err(Error::NotSmoothHere);
    }
    let n = g.dim();
    let jacobian = projection_matrix(&k)?;
    let inv_r = Scalar::one() / r;
    let hessian: RMatrix = identity(n)
        .iter()
        .zip(&jacobian)
        .map(|(e, row)| e.sub(row).scale(&inv_r))
        .collect();
    let conj = g.conjugate()?;
    let k_conj = critical_cone(&conj, &p.v, &p.y)?.cone;
    let via_conjugate: RMatrix = projection_matrix(&k_conj)?.iter().map(|row| row.scale(&inv_r)).collect();
    if via_conjugate != hessian {
        return Err(Error::Verification(
            "envelope Hessian differs between the primal and conjugate critical cones".into(),
        ));
    }
    Ok(ProxDerivatives { jacobian, hessian })
}

pub fn prox_jacobian(g: &PolyhedralFunc, r: &Scalar, x: &RVec) -> Result<RMatrix> {
    Ok(prox_derivatives(g, r, x)?.jacobian)
}

pub fn envelope_hessian(g: &PolyhedralFunc, r: &Scalar, x: &RVec) -> Result<RMatrix> {
    Ok(prox_derivatives(g, r, x)?.hessian)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionSmoothness {
    pub class: Smoothness,
    /// `P_C(x)`
    pub z: RVec,
    /// `N_C(z)`
    pub normal_cone: PolyCone,
}

/// Smoothness of the projection onto `C` near `x`: `P_C` is `C¹` around `x`
/// iff `x - P_C(x)` lies in the relative interior of `N_C(P_C(x))`.
pub fn projection_smoothness(c: &HPolyhedron, x: &RVec) -> Result<ProjectionSmoothness> {
    let g = PolyhedralFunc::indicator(c)?;
    let p = prox(&g, &Scalar::one(), x)?;
    let normal_cone = c.normal_cone(&p.y)?;
    let class = if is_ri_subgradient(&g, &p.y, &p.v)? {
        Smoothness::C1Near
    } else {
        Smoothness::NotC1
    };
    Ok(ProjectionSmoothness {
        class,
        z: p.y,
        normal_cone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use polyvar_geometry::{frac, int};

    fn q(p: i64, d: i64) -> RVec {
        RVec::new(vec![frac(p, d)])
    }

    #[test]
    fn soft_threshold_examples() {
        let g = PolyhedralFunc::abs();
        let p = prox(&g, &int(1), &q(3, 2)).unwrap();
        assert_eq!(p.y, q(1, 2));
        assert_eq!(p.envelope, int(1));
        let p = prox(&g, &int(1), &q(1, 2)).unwrap();
        assert_eq!(p.y, q(0, 1));
        assert_eq!(p.envelope, frac(1, 8));
    }

    #[test]
    fn prox_of_max_at_diagonal() {
        let g = PolyhedralFunc::max_of_coordinates(2);
        let p = prox(&g, &int(1), &RVec::new(vec![frac(1, 2), frac(1, 2)])).unwrap();
        assert_eq!(p.y, RVec::zeros(2));
        assert_eq!(p.v, RVec::new(vec![frac(1, 2), frac(1, 2)]));
    }

    #[test]
    fn envelope_gradient_examples() {
        let g = PolyhedralFunc::abs();
        assert_eq!(envelope_gradient(&g, &int(1), &q(3, 2)).unwrap(), q(1, 1));
        assert_eq!(envelope_gradient(&g, &int(1), &q(1, 2)).unwrap(), q(1, 2));
        assert_eq!(envelope_gradient(&g, &int(1), &q(0, 1)).unwrap(), q(0, 1));
    }

    #[test]
    fn directional_derivative_examples() {
        let g = PolyhedralFunc::abs();
        let d = |x: RVec, h: i64| prox_directional_derivative(&g, &int(1), &x, &q(h, 1)).unwrap();
        assert_eq!(d(q(1, 1), 1), q(1, 1));
        assert_eq!(d(q(1, 1), -1), q(0, 1));
        assert_eq!(d(q(1, 2), 5), q(0, 1));
        assert_eq!(d(q(2, 1), -3), q(-3, 1));
    }

    #[test]
    fn classification_examples() {
        let g = PolyhedralFunc::abs();
        assert_eq!(smoothness_classify(&g, &int(1), &q(1, 2)).unwrap(), Smoothness::C1Near);
        assert_eq!(smoothness_classify(&g, &int(1), &q(1, 1)).unwrap(), Smoothness::NotC1);
        let quadrant = HPolyhedron::new(
            2,
            vec![(RVec::from_ints(&[-1, 0]), int(0)), (RVec::from_ints(&[0, -1]), int(0))],
            vec![],
        )
        .unwrap();
        let orth = PolyhedralFunc::indicator(&quadrant).unwrap();
        assert_eq!(smoothness_classify(&orth, &int(1), &RVec::from_ints(&[1, -1])).unwrap(), Smoothness::C1Near);
    }

    #[test]
    fn jacobian_examples() {
        let g = PolyhedralFunc::abs();
        let d = prox_derivatives(&g, &int(1), &q(1, 2)).unwrap();
        assert_eq!((d.jacobian, d.hessian), (vec![q(0, 1)], vec![q(1, 1)]));
        let d = prox_derivatives(&g, &int(1), &q(2, 1)).unwrap();
        assert_eq!((d.jacobian, d.hessian), (vec![q(1, 1)], vec![q(0, 1)]));
        let g = PolyhedralFunc::max_of_coordinates(2);
        let d = prox_derivatives(&g, &int(1), &RVec::new(vec![frac(1, 2), frac(1, 2)])).unwrap();
        let half = frac(1, 2);
        assert_eq!(d.jacobian, vec![RVec::new(vec![half.clone(), half.clone()]); 2]);
        assert_eq!(
            d.hessian,
            vec![RVec::new(vec![half.clone(), -half.clone()]), RVec::new(vec![-half.clone(), half])]
        );
        assert_eq!(prox_derivatives(&PolyhedralFunc::abs(), &int(1), &q(1, 1)), Err(Error::NotSmoothHere));
    }

    #[test]
    fn projection_smoothness_examples() {
        let quadrant = HPolyhedron::new(
            2,
            vec![(RVec::from_ints(&[-1, 0]), int(0)), (RVec::from_ints(&[0, -1]), int(0))],
            vec![],
        )
        .unwrap();
        let s = projection_smoothness(&quadrant, &RVec::from_ints(&[1, -1])).unwrap();
        assert_eq!(s.class, Smoothness::C1Near);
        assert_eq!(s.z, RVec::from_ints(&[1, 0]));
        let s = projection_smoothness(&quadrant, &RVec::from_ints(&[0, -1])).unwrap();
        assert_eq!(s.class, Smoothness::NotC1);
        assert_eq!(s.z, RVec::zeros(2));
        let s = projection_smoothness(&HPolyhedron::whole(2), &RVec::from_ints(&[3, 4])).unwrap();
        assert_eq!(s.class, Smoothness::C1Near);
    }
}
