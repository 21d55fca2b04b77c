//! Generalized equations `0 ∈ psi(x) + ∂g(x)` with smooth `psi` and polyhedral
//! `g`, and KKT systems of composite problems `min phi(x) + g(Phi(x))`.
//!
//! The smooth side is evaluated in floats. Points and multipliers are snapped
//! to rationals before any polyhedral decision.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num::{One, ToPrimitive, Zero};
use polyvar_geometry::linalg::nullspace;
use polyvar_geometry::scalar::from_f64;
use polyvar_geometry::{HPolyhedron, PolyCone, RVec, Scalar};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::expr::{Expr, ExprMap};
use crate::oracle::finite_diff;
use crate::polyfunc::PolyhedralFunc;
use crate::prox::prox;
use crate::second_order::{critical_cone, face_pair_differences, is_ri_subgradient};

pub type VecFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type MatFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type MatListFn = Arc<dyn Fn(&[f64]) -> Vec<DMatrix<f64>> + Send + Sync>;

/// Default tolerance for snapping float data onto exact polyhedral objects.
pub const SNAP_TOL: f64 = 1e-8;
const RANK_TOL: f64 = 1e-9;
const NEWTON_TOL: f64 = 1e-10;
const NEWTON_MAX_ITER: usize = 50;

/// The closest `p/q` with `q <= 10^6` within `tol` of `x`, found along the
/// continued fraction expansion; the exact binary value when there is none.
pub fn rationalize(x: f64, tol: f64) -> Scalar {
    const MAX_DEN: i128 = 1_000_000;
    if x.is_finite() && x.abs() < 1e12 {
        let (mut h0, mut h1, mut k0, mut k1) = (0i128, 1i128, 1i128, 0i128);
        let mut v = x;
        for _ in 0..64 {
            let a = v.floor();
            let ai = a as i128;
            let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
            if k2 > MAX_DEN {
                break;
            }
            if (x - h2 as f64 / k2 as f64).abs() <= tol {
                return Scalar::new(h2.into(), k2.into());
            }
            (h0, h1, k0, k1) = (h1, h2, k1, k2);
            let rest = v - a;
            if rest == 0.0 {
                break;
            }
            v = 1.0 / rest;
        }
    }
    from_f64(x).unwrap_or_else(Scalar::zero)
}

pub fn rationalize_vec(x: &[f64], tol: f64) -> RVec {
    x.iter().map(|&v| rationalize(v, tol)).collect()
}

fn rationalize_matrix(a: &DMatrix<f64>, tol: f64) -> Vec<RVec> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| rationalize(a[(i, j)], tol)).collect())
        .collect()
}

/// Columns of a basis as an `m × k` float matrix.
fn basis_matrix(basis: &[RVec], m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m, basis.len(), |i, j| basis[j][i].to_f64().unwrap_or(f64::NAN))
}

/// Singular values above `1e-9` times the largest (or above `1e-9` absolutely).
pub fn numeric_rank(a: &DMatrix<f64>) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let sv = a.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    let cutoff = RANK_TOL * top.max(1.0);
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Exact Euclidean projection onto a nonempty polyhedron.
pub fn project_onto(c: &HPolyhedron, x: &RVec) -> Result<RVec> {
    let g = PolyhedralFunc::indicator(c)?;
    Ok(prox(&g, &Scalar::one(), x)?.y)
}

/// `dist(target, ∂g(x))` with `x` snapped to a rational; `+inf` off the domain.
pub fn distance_to_subdifferential(g: &PolyhedralFunc, x: &[f64], target: &[f64]) -> Result<f64> {
    check_dim(g.dim(), x.len())?;
    let z = rationalize_vec(x, 1e-12);
    if !g.in_domain(&z) {
        return Ok(f64::INFINITY);
    }
    let t = RVec::from_f64s(target).ok_or_else(|| Error::Parse("non-finite target".into()))?;
    let sub = g.subdifferential(&z)?.to_h()?;
    let p = project_onto(&sub, &t)?;
    Ok(p.sub(&t).norm_sq().to_f64().unwrap_or(f64::INFINITY).sqrt())
}

/// Snaps `(x, lambda)` onto `gph ∂g`: `x` to a nearby rational in the domain,
/// `lambda` to a nearby rational and then, if needed, exactly onto `∂g(x)`.
/// Returns the snapped pair and the distance moved by `lambda`.
pub fn snap_pair(g: &PolyhedralFunc, x: &[f64], lambda: &[f64], tol: f64) -> Result<(RVec, RVec, f64)> {
    check_dim(g.dim(), x.len())?;
    check_dim(g.dim(), lambda.len())?;
    let z = rationalize_vec(x, tol);
    if !g.in_domain(&z) {
        return Err(Error::NotInDomain);
    }
    let l = rationalize_vec(lambda, tol);
    let sub = g.subdifferential(&z)?;
    let snapped = if sub.contains(&l) {
        l
    } else {
        let exact = RVec::from_f64s(lambda).ok_or_else(|| Error::Parse("non-finite multiplier".into()))?;
        project_onto(&sub.to_h()?, &exact)?
    };
    let distance = snapped
        .to_f64s()
        .iter()
        .zip(lambda)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok((z, snapped, distance))
}

/// `0 ∈ psi(x) + ∂g(x)` with `psi: R^m -> R^m` and its Jacobian.
#[derive(Clone)]
pub struct GEProblem {
    pub m: usize,
    pub psi: VecFn,
    pub jpsi: MatFn,
    pub g: PolyhedralFunc,
}

impl fmt::Debug for GEProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GEProblem").field("m", &self.m).field("g", &self.g).finish_non_exhaustive()
    }
}

/// File form: `{"g": {...}, "psi": [expr, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GEProblemSpec {
    pub g: PolyhedralFunc,
    pub psi: Vec<Expr>,
}

impl GEProblem {
    pub fn new<F, J>(g: PolyhedralFunc, psi: F, jpsi: J) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        J: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        GEProblem {
            m: g.dim(),
            psi: Arc::new(psi),
            jpsi: Arc::new(jpsi),
            g,
        }
    }

    /// `psi(x) = A x + c`.
    pub fn affine(g: PolyhedralFunc, a: DMatrix<f64>, c: Vec<f64>) -> Self {
        let a2 = a.clone();
        GEProblem::new(
            g,
            move |x| (&a * DVector::from_column_slice(x) + DVector::from_column_slice(&c)).iter().cloned().collect(),
            move |_| a2.clone(),
        )
    }

    pub fn from_spec(spec: GEProblemSpec) -> Result<Self> {
        let m = spec.g.dim();
        check_dim(m, spec.psi.len())?;
        let map = Arc::new(ExprMap::new(m, spec.psi)?);
        let map2 = map.clone();
        Ok(GEProblem::new(spec.g, move |x| map.eval(x), move |x| map2.jacobian(x)))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: GEProblemSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        GEProblem::from_spec(spec)
    }

    /// Central differences of `psi` against `jpsi` at `x`.
    pub fn check_jacobian(&self, x: &[f64], tol: f64) -> Result<()> {
        let fd = finite_diff(|y| Ok((self.psi)(y)), x, 1e-5)?;
        let err = (fd - (self.jpsi)(x)).abs().max();
        if err > tol {
            return Err(Error::Verification(format!("jpsi differs from finite differences of psi by {err:e}")));
        }
        Ok(())
    }

    /// `(x, -psi(x))` snapped onto `gph ∂g`; `NotSolution` beyond `tol`.
    pub fn snap_solution(&self, x: &[f64], tol: f64) -> Result<(RVec, RVec)> {
        let lambda: Vec<f64> = (self.psi)(x).iter().map(|v| -v).collect();
        let (z, l, distance) = snap_pair(&self.g, x, &lambda, tol)?;
        if distance > tol {
            return Err(Error::NotSolution { distance });
        }
        Ok((z, l))
    }
}

/// `-psi(x) ∈ ri ∂g(x)` after snapping.
pub fn nondegeneracy_test(p: &GEProblem, x: &[f64], tol: f64) -> Result<bool> {
    let (z, l) = p.snap_solution(x, tol)?;
    is_ri_subgradient(&p.g, &z, &l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MrCriteria {
    /// `∇psi(x) K + K^⊥ = R^m`
    pub criterion_a: bool,
    /// `{w ∈ K : ∇psi(x)^T w ∈ K^⊥} = {0}`
    pub criterion_b: bool,
}

/// Both criteria at a nondegenerate solution, where `K` is a subspace with
/// basis `B`: (a) by the rank of `[∇psi B | B⊥]`, (b) by the rank of `Bᵀ∇psi B`.
pub fn mr_criteria(p: &GEProblem, x: &[f64]) -> Result<MrCriteria> {
    let (z, l) = p.snap_solution(x, SNAP_TOL)?;
    let k = critical_cone(&p.g, &z, &l)?.cone;
    if !k.is_subspace() {
        return Err(Error::DegenerateSolution);
    }
    let m = p.m;
    let basis = k.lineality_basis().to_vec();
    if basis.is_empty() {
        return Ok(MrCriteria {
            criterion_a: true,
            criterion_b: true,
        });
    }
    let jac = (p.jpsi)(x);
    let b = basis_matrix(&basis, m);
    let b_perp = basis_matrix(&nullspace(&basis, m), m);
    let jb = &jac * &b;
    let stacked = DMatrix::from_fn(m, m, |i, j| if j < basis.len() { jb[(i, j)] } else { b_perp[(i, j - basis.len())] });
    let criterion_a = numeric_rank(&stacked) == m;
    let reduced = b.transpose() * &jac * &b;
    let criterion_b = numeric_rank(&reduced) == basis.len();
    if criterion_a != criterion_b {
        return Err(Error::Verification("range criterion and kernel criterion disagree".into()));
    }
    Ok(MrCriteria {
        criterion_a,
        criterion_b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegularityStatus {
    NotMetricallyRegular,
    StronglyMetricallyRegular,
}

impl RegularityStatus {
    pub fn from_bool(regular: bool) -> Self {
        if regular {
            RegularityStatus::StronglyMetricallyRegular
        } else {
            RegularityStatus::NotMetricallyRegular
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            RegularityStatus::NotMetricallyRegular => "not_metrically_regular",
            RegularityStatus::StronglyMetricallyRegular => "strongly_metrically_regular",
        }
    }
}

/// `{w : -w ∈ Q, -Jᵀw ∈ Q°}`, the kernel of the coderivative of
/// `psi + ∂g` on one piece `Q° × Q` of the limiting normal cone.
fn coderivative_kernel(q: &PolyCone, jac: &[RVec]) -> Result<PolyCone> {
    let m = q.dim();
    let jh = |h: &RVec| -> RVec { (0..m).map(|i| -(0..m).map(|k| &jac[i][k] * &h[k]).fold(Scalar::zero(), |a, b| a + b)).collect() };
    let polar = q.polar();
    let mut ineqs: Vec<RVec> = q.halfspaces().iter().map(RVec::neg).collect();
    let mut eqs: Vec<RVec> = q.equations().to_vec();
    ineqs.extend(polar.halfspaces().iter().map(jh));
    eqs.extend(polar.equations().iter().map(jh));
    Ok(PolyCone::from_halfspaces(m, &ineqs, &eqs)?)
}

/// Metric regularity of `psi + ∂g` at `x` for 0, which always coincides with
/// strong metric regularity. Decided piecewise by the coderivative criterion
/// on the limiting normal cone, and by criterion (b) as well when `x` is
/// nondegenerate.
pub fn regularity_status(p: &GEProblem, x: &[f64]) -> Result<RegularityStatus> {
    let (z, l) = p.snap_solution(x, SNAP_TOL)?;
    let k = critical_cone(&p.g, &z, &l)?.cone;
    let jac = rationalize_matrix(&(p.jpsi)(x), 1e-9);
    let mut regular = true;
    for q in face_pair_differences(&k)? {
        if !coderivative_kernel(&q, &jac)?.is_zero() {
            regular = false;
            break;
        }
    }
    if k.is_subspace() {
        let by_rank = mr_criteria(p, x)?.criterion_b;
        if by_rank != regular {
            return Err(Error::Verification("coderivative criterion disagrees with criterion (b)".into()));
        }
    }
    Ok(RegularityStatus::from_bool(regular))
}

/// `F(x) = x - prox_g(x - psi(x) + y)` together with the exact prox pair.
fn natural_map_exact(p: &GEProblem, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, RVec, RVec)> {
    let psi = (p.psi)(x);
    let arg: Vec<f64> = (0..p.m).map(|i| x[i] - psi[i] + y[i]).collect();
    let arg = RVec::from_f64s(&arg).ok_or_else(|| Error::Parse("non-finite iterate".into()))?;
    let pr = prox(&p.g, &Scalar::one(), &arg)?;
    let yf = pr.y.to_f64s();
    Ok(((0..p.m).map(|i| x[i] - yf[i]).collect(), pr.y, pr.v))
}

pub fn natural_map(p: &GEProblem, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    Ok(natural_map_exact(p, x, y)?.0)
}

/// Projection onto the lineality space of the critical cone at `(z, lambda)`,
/// an element of the generalized Jacobian of the proximal mapping there.
fn lineality_projection(g: &PolyhedralFunc, z: &RVec, lambda: &RVec) -> Result<DMatrix<f64>> {
    let k = critical_cone(g, z, lambda)?.cone;
    let m = g.dim();
    let basis = k.lineality_basis();
    if basis.is_empty() {
        return Ok(DMatrix::zeros(m, m));
    }
    let b = basis_matrix(basis, m);
    let gram = b.transpose() * &b;
    let inv = gram.try_inverse().ok_or_else(|| Error::Verification("singular lineality basis".into()))?;
    Ok(&b * inv * b.transpose())
}

/// `I - P (I - ∇psi(x))` with `P` the lineality projection at the current
/// prox pair.
pub fn newton_element(p: &GEProblem, x: &[f64], y: &[f64]) -> Result<DMatrix<f64>> {
    let (_, z, l) = natural_map_exact(p, x, y)?;
    let proj = lineality_projection(&p.g, &z, &l)?;
    let id = DMatrix::identity(p.m, p.m);
    Ok(&id - proj * (&id - (p.jpsi)(x)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalizationResult {
    pub y: Vec<f64>,
    pub x: Vec<f64>,
    /// `B (Bᵀ ∇psi B)⁻¹ Bᵀ`, absent when the solution is degenerate.
    pub jacobian_sigma: Option<Vec<Vec<f64>>>,
    pub newton_iterations: usize,
    pub residual: f64,
}

fn rows_of(a: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..a.nrows()).map(|i| a.row(i).iter().cloned().collect()).collect()
}

/// `∇σ(y) = B (Bᵀ ∇psi(x) B)⁻¹ Bᵀ` with `B` a basis of the critical cone at
/// the exact pair `(z, lambda)`; the zero matrix when that cone is `{0}`.
pub fn sigma_jacobian(p: &GEProblem, x: &[f64], z: &RVec, lambda: &RVec) -> Result<Option<DMatrix<f64>>> {
    let k = critical_cone(&p.g, z, lambda)?.cone;
    if !k.is_subspace() {
        return Ok(None);
    }
    let m = p.m;
    let basis = k.lineality_basis();
    if basis.is_empty() {
        return Ok(Some(DMatrix::zeros(m, m)));
    }
    let b = basis_matrix(basis, m);
    let reduced = b.transpose() * (p.jpsi)(x) * &b;
    Ok(reduced.try_inverse().map(|inv| &b * inv * b.transpose()))
}

/// Semismooth Newton on the natural map for `y ∈ psi(x) + ∂g(x)`, started at
/// `x0`.
pub fn solve_localization(p: &GEProblem, y: &[f64], x0: &[f64]) -> Result<LocalizationResult> {
    check_dim(p.m, y.len())?;
    check_dim(p.m, x0.len())?;
    let mut x = x0.to_vec();
    let mut residual = f64::INFINITY;
    for it in 0..=NEWTON_MAX_ITER {
        let (f, z, l) = natural_map_exact(p, &x, y)?;
        residual = f.iter().map(|v| v * v).sum::<f64>().sqrt();
        if residual <= NEWTON_TOL {
            // At a solution x = z up to the residual, and (z, l) is an exact graph pair.
            let jacobian_sigma = sigma_jacobian(p, &x, &z, &l)?.map(|j| rows_of(&j));
            return Ok(LocalizationResult {
                y: y.to_vec(),
                x,
                jacobian_sigma,
                newton_iterations: it,
                residual,
            });
        }
        if it == NEWTON_MAX_ITER || !residual.is_finite() {
            break;
        }
        let proj = lineality_projection(&p.g, &z, &l)?;
        let id = DMatrix::identity(p.m, p.m);
        let jn = &id - proj * (&id - (p.jpsi)(&x));
        let step = match jn.lu().solve(&-DVector::from_vec(f)) {
            Some(d) => d,
            None => break,
        };
        for i in 0..p.m {
            x[i] += step[i];
        }
    }
    Err(Error::NoConvergence {
        iterations: NEWTON_MAX_ITER,
        residual,
    })
}

/// `min phi(x) + g(Phi(x))` with `phi: R^n -> R`, `Phi: R^n -> R^m`.
#[derive(Clone)]
pub struct KKTProblem {
    pub n: usize,
    pub m: usize,
    pub phi: ScalarFn,
    pub grad_phi: VecFn,
    pub hess_phi: MatFn,
    pub big_phi: VecFn,
    /// `m × n`
    pub jac_big_phi: MatFn,
    /// One `n × n` Hessian per component of `Phi`.
    pub hess_big_phi: MatListFn,
    pub g: PolyhedralFunc,
}

impl fmt::Debug for KKTProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KKTProblem")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("g", &self.g)
            .finish_non_exhaustive()
    }
}

/// File form: `{"n": 1, "phi": expr, "Phi": [expr, ...], "g": {...}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KKTProblemSpec {
    pub n: usize,
    pub phi: Expr,
    #[serde(rename = "Phi")]
    pub big_phi: Vec<Expr>,
    pub g: PolyhedralFunc,
}

impl KKTProblem {
    pub fn from_spec(spec: KKTProblemSpec) -> Result<Self> {
        let n = spec.n;
        let m = spec.g.dim();
        check_dim(m, spec.big_phi.len())?;
        let phi = Arc::new(ExprMap::new(n, vec![spec.phi])?);
        let grad = Arc::new(ExprMap::new(n, phi.jacobian_exprs()[0].clone())?);
        let big = Arc::new(ExprMap::new(n, spec.big_phi)?);
        let big_second: Arc<Vec<ExprMap>> = Arc::new(
            big.jacobian_exprs()
                .iter()
                .map(|row| ExprMap::new(n, row.clone()))
                .collect::<Result<_>>()?,
        );
        let (phi2, grad2, big2) = (phi.clone(), grad.clone(), big.clone());
        Ok(KKTProblem {
            n,
            m,
            phi: Arc::new(move |x| phi2.eval(x)[0]),
            grad_phi: Arc::new(move |x| grad.eval(x)),
            hess_phi: Arc::new(move |x| grad2.jacobian(x)),
            big_phi: Arc::new(move |x| big.eval(x)),
            jac_big_phi: Arc::new(move |x| big2.jacobian(x)),
            hess_big_phi: Arc::new(move |x| big_second.iter().map(|h| h.jacobian(x)).collect()),
            g: spec.g,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: KKTProblemSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        KKTProblem::from_spec(spec)
    }

    /// `∇phi(x) + ∇Phi(x)ᵀ lambda`
    pub fn lagrangian_gradient(&self, x: &[f64], lambda: &[f64]) -> Vec<f64> {
        let grad = DVector::from_vec((self.grad_phi)(x));
        let jt = (self.jac_big_phi)(x).transpose();
        (grad + jt * DVector::from_column_slice(lambda)).iter().cloned().collect()
    }

    /// `∇²phi(x) + Σ lambda_i ∇²Phi_i(x)`
    pub fn lagrangian_hessian(&self, x: &[f64], lambda: &[f64]) -> DMatrix<f64> {
        let mut h = (self.hess_phi)(x);
        for (li, hi) in lambda.iter().zip((self.hess_big_phi)(x)) {
            h += hi * *li;
        }
        h
    }
}

/// Decides whether the KKT solution map is (strongly) metrically regular at
/// `(x, lambda)`: for every piece `Q° × Q` of the limiting normal cone to
/// `gph ∂g` at `(Phi(x), lambda)` the cone
///
/// ```text
/// {(w, w') : H w + ∇Phiᵀ w' = 0, w' ∈ Q°, -∇Phi w ∈ Q}
/// ```
///
/// must be `{0}`; triviality is decided exactly from its generators.
pub fn kkt_regularity(k: &KKTProblem, x: &[f64], lambda: &[f64], tol: f64) -> Result<bool> {
    check_dim(k.n, x.len())?;
    check_dim(k.m, lambda.len())?;
    let grad_l = k.lagrangian_gradient(x, lambda);
    let norm = grad_l.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > tol {
        return Err(Error::NotKKTPoint(format!("|∇L| = {norm:e}")));
    }
    let phi_x = (k.big_phi)(x);
    let (z, l, distance) = snap_pair(&k.g, &phi_x, lambda, tol).map_err(|e| match e {
        Error::NotInDomain => Error::NotKKTPoint("Phi(x) is not in dom g".into()),
        e => e,
    })?;
    if distance > tol {
        return Err(Error::NotKKTPoint(format!("lambda is {distance:e} away from ∂g(Phi(x))")));
    }
    let kc = critical_cone(&k.g, &z, &l)?.cone;
    let h = rationalize_matrix(&k.lagrangian_hessian(x, lambda), 1e-9);
    let d = rationalize_matrix(&(k.jac_big_phi)(x), 1e-9);
    let (n, m) = (k.n, k.m);
    let dim = n + m;

    let mut eqs: Vec<RVec> = Vec::new();
    for i in 0..n {
        let mut row = RVec::zeros(dim);
        for j in 0..n {
            row[j] = h[i][j].clone();
        }
        for r in 0..m {
            row[n + r] = d[r][i].clone();
        }
        eqs.push(row);
    }
    // h·(-D w) = (-Dᵀh)·w
    let on_w = |hv: &RVec| -> RVec {
        let mut row = RVec::zeros(dim);
        for j in 0..n {
            row[j] = -(0..m).map(|r| &d[r][j] * &hv[r]).fold(Scalar::zero(), |a, b| a + b);
        }
        row
    };
    let on_w_prime = |hv: &RVec| -> RVec { RVec::zeros(n).concat(hv) };

    for q in face_pair_differences(&kc)? {
        let polar = q.polar();
        let mut ineqs: Vec<RVec> = q.halfspaces().iter().map(&on_w).collect();
        ineqs.extend(polar.halfspaces().iter().map(&on_w_prime));
        let mut all_eqs = eqs.clone();
        all_eqs.extend(q.equations().iter().map(&on_w));
        all_eqs.extend(polar.equations().iter().map(&on_w_prime));
        if !PolyCone::from_halfspaces(dim, &ineqs, &all_eqs)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use polyvar_geometry::{frac, int};

    fn nonneg() -> PolyhedralFunc {
        PolyhedralFunc::from_parts(1, vec![(RVec::from_ints(&[0]), int(0))], vec![(RVec::from_ints(&[-1]), int(0))]).unwrap()
    }

    fn affine1(g: PolyhedralFunc, a: f64, c: f64) -> GEProblem {
        GEProblem::affine(g, DMatrix::from_element(1, 1, a), vec![c])
    }

    #[test]
    fn rationalize_snaps_small_fractions() {
        assert_eq!(rationalize(1.0 / 3.0, 1e-12), frac(1, 3));
        assert_eq!(rationalize(-0.75, 1e-12), frac(-3, 4));
        assert_eq!(rationalize(2.0, 1e-12), int(2));
        assert_eq!(rationalize(0.0, 1e-12), int(0));
    }

    #[test]
    fn nondegeneracy_examples() {
        assert!(nondegeneracy_test(&affine1(PolyhedralFunc::abs(), 1.0, 0.0), &[0.0], SNAP_TOL).unwrap());
        assert!(nondegeneracy_test(&affine1(nonneg(), 1.0, -1.0), &[1.0], SNAP_TOL).unwrap());
        assert!(!nondegeneracy_test(&affine1(PolyhedralFunc::abs(), 1.0, -1.0), &[0.0], SNAP_TOL).unwrap());
        assert!(matches!(
            nondegeneracy_test(&affine1(PolyhedralFunc::abs(), 1.0, -1.0), &[0.5], SNAP_TOL),
            Err(Error::NotSolution { .. })
        ));
    }

    #[test]
    fn criteria_examples() {
        let c = mr_criteria(&affine1(nonneg(), 1.0, -1.0), &[1.0]).unwrap();
        assert!(c.criterion_a && c.criterion_b);
        let c = mr_criteria(&affine1(PolyhedralFunc::abs(), 1.0, 0.0), &[0.0]).unwrap();
        assert!(c.criterion_a && c.criterion_b);
        let c = mr_criteria(&affine1(nonneg(), 0.0, 0.0), &[1.0]).unwrap();
        assert!(!c.criterion_a && !c.criterion_b);
        assert_eq!(
            mr_criteria(&affine1(PolyhedralFunc::abs(), 1.0, -1.0), &[0.0]).unwrap_err(),
            Error::DegenerateSolution
        );
    }

    #[test]
    fn status_examples() {
        use RegularityStatus::*;
        assert_eq!(regularity_status(&affine1(nonneg(), 1.0, -1.0), &[1.0]).unwrap(), StronglyMetricallyRegular);
        assert_eq!(regularity_status(&affine1(nonneg(), 0.0, 0.0), &[1.0]).unwrap(), NotMetricallyRegular);
        assert_eq!(regularity_status(&affine1(PolyhedralFunc::abs(), 1.0, 0.0), &[0.0]).unwrap(), StronglyMetricallyRegular);
        // Degenerate: x = 0 solves 0 ∈ x - 1 + ∂|x| with -psi(0) = 1 on the boundary.
        assert_eq!(regularity_status(&affine1(PolyhedralFunc::abs(), 1.0, -1.0), &[0.0]).unwrap(), StronglyMetricallyRegular);
        assert_eq!(regularity_status(&affine1(nonneg(), 0.0, 0.0), &[0.0]).unwrap(), NotMetricallyRegular);
    }

    #[test]
    fn localization_examples() {
        let p = affine1(nonneg(), 1.0, -1.0);
        for y in [-0.25, 0.0, 0.125, 0.3] {
            let sol = solve_localization(&p, &[y], &[1.0]).unwrap();
            assert!((sol.x[0] - (1.0 + y)).abs() < 1e-12);
            assert_eq!(sol.jacobian_sigma, Some(vec![vec![1.0]]));
        }
        let p = affine1(PolyhedralFunc::abs(), 1.0, 0.0);
        for y in [-0.5, 0.0, 0.75] {
            let sol = solve_localization(&p, &[y], &[0.0]).unwrap();
            assert!(sol.x[0].abs() < 1e-12);
            assert_eq!(sol.jacobian_sigma, Some(vec![vec![0.0]]));
        }
        let p = affine1(nonneg(), 0.0, 0.0);
        assert!(matches!(solve_localization(&p, &[0.25], &[1.0]), Err(Error::NoConvergence { .. })));
    }

    fn kkt(json: &str) -> KKTProblem {
        KKTProblem::from_json(json).unwrap()
    }

    #[test]
    fn kkt_examples() {
        let abs = r#"{"pieces":[{"a":["1"],"alpha":"0"},{"a":["-1"],"alpha":"0"}],"constraints":[],"m":1}"#;
        let p = kkt(&format!(
            r#"{{"n":1,"phi":{{"mul":[{{"const":"1/2"}},{{"pow":[{{"var":0}},2]}}]}},"Phi":[{{"var":0}}],"g":{abs}}}"#
        ));
        assert!(kkt_regularity(&p, &[0.0], &[0.0], SNAP_TOL).unwrap());

        let interval = r#"{"m":1,"pieces":[{"a":["0"],"alpha":"0"}],"constraints":[{"b":["1"],"beta":"1"},{"b":["-1"],"beta":"1"}]}"#;
        let p = kkt(&format!(
            r#"{{"n":1,"phi":{{"mul":[{{"const":"-1/2"}},{{"pow":[{{"var":0}},2]}}]}},"Phi":[{{"var":0}}],"g":{interval}}}"#
        ));
        assert!(kkt_regularity(&p, &[1.0], &[1.0], SNAP_TOL).unwrap());

        let zero = r#"{"m":2,"pieces":[{"a":["0","0"],"alpha":"0"}],"constraints":[]}"#;
        let quad = |a: i64, b: i64| {
            format!(
                r#"{{"n":2,"phi":{{"add":[{{"mul":[{{"const":"{a}/2"}},{{"pow":[{{"var":0}},2]}}]}},{{"mul":[{{"const":"{b}/2"}},{{"pow":[{{"var":1}},2]}}]}}]}},"Phi":[{{"var":0}},{{"var":1}}],"g":{zero}}}"#
            )
        };
        assert!(kkt_regularity(&kkt(&quad(1, -3)), &[0.0, 0.0], &[0.0, 0.0], SNAP_TOL).unwrap());
        assert!(!kkt_regularity(&kkt(&quad(1, 0)), &[0.0, 0.0], &[0.0, 0.0], SNAP_TOL).unwrap());
        assert!(matches!(
            kkt_regularity(&kkt(&quad(1, 1)), &[1.0, 0.0], &[0.0, 0.0], SNAP_TOL),
            Err(Error::NotKKTPoint(_))
        ));
    }
}
