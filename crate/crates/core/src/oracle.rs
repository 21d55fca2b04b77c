//! Brute-force and sampling oracles. They only ever test inclusions and
//! inequalities against exactly computed objects.

use nalgebra::DMatrix;
use num::{One, ToPrimitive};
use polyvar_geometry::scalar::serde_scalar;
use polyvar_geometry::{frac, int, HPolyhedron, PolyCone, RVec, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geneq::{distance_to_subdifferential, rationalize, solve_localization, GEProblem};
use crate::polyfunc::{Extended, PolyhedralFunc};
use crate::prox::prox;
use crate::second_order::{critical_cone, sample_graph_offset};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub count: usize,
    #[serde(with = "serde_scalar")]
    pub radius: Scalar,
    pub seed: u64,
    pub denominator_bound: u64,
}

impl SampleSpec {
    pub fn new(count: usize, radius: Scalar, seed: u64) -> Self {
        SampleSpec {
            count,
            radius,
            seed,
            denominator_bound: 16,
        }
    }

    pub fn sampler(&self) -> Sampler {
        Sampler::new(self.seed, self.denominator_bound)
    }
}

/// Seeded source of small rationals `p/q` with `1 <= q <= bound`.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
    bound: i64,
}

impl Sampler {
    pub fn new(seed: u64, denominator_bound: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            bound: denominator_bound.clamp(1, i64::MAX as u64) as i64,
        }
    }

    /// Uniform over `{p/q : |p| <= q <= bound}`, a rational in `[-1, 1]`.
    pub fn rational(&mut self) -> Scalar {
        let q = self.rng.gen_range(1..=self.bound);
        let p = self.rng.gen_range(-q..=q);
        frac(p, q)
    }

    /// A rational in `[0, 1]`.
    pub fn nonneg(&mut self) -> Scalar {
        let q = self.rng.gen_range(1..=self.bound);
        let p = self.rng.gen_range(0..=q);
        frac(p, q)
    }

    pub fn integer(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn vector(&mut self, m: usize) -> RVec {
        (0..m).map(|_| self.rational()).collect()
    }

    /// A point with l1 norm at most `radius`.
    pub fn in_l1_ball(&mut self, m: usize, radius: &Scalar) -> RVec {
        let v = self.vector(m);
        if v.is_zero() {
            return v;
        }
        let k = self.nonneg() * radius / v.norm_l1();
        v.scale(&k)
    }

    /// `v` rescaled to a Euclidean norm just below `target`; the norm is
    /// over-approximated by a rational with a small denominator.
    pub fn scale_to_norm(&self, v: &RVec, target: &Scalar) -> RVec {
        let n = v.norm_sq().to_f64().unwrap_or(f64::INFINITY).sqrt();
        if v.is_zero() || !n.is_finite() {
            return v.clone();
        }
        let upper = rationalize(n * (1.0 + 1e-6), n * 1e-7);
        v.scale(&(target / upper))
    }

    /// A nonnegative combination of the rays plus an arbitrary combination of
    /// the lineality basis.
    pub fn in_cone(&mut self, k: &PolyCone) -> RVec {
        let mut x = RVec::zeros(k.dim());
        for r in k.rays() {
            let c = self.nonneg();
            x = x.axpy(&c, r);
        }
        for l in k.lineality_basis() {
            let c = self.rational();
            x = x.axpy(&c, l);
        }
        x
    }
}

/// `[g(z + tw) - g(z) - t<lambda, w>] / (t^2 / 2)`, `+inf` off the domain.
pub fn second_diff_quotient(g: &PolyhedralFunc, z: &RVec, lambda: &RVec, t: &Scalar, w: &RVec) -> Result<Extended> {
    check_dim(g.dim(), lambda.dim())?;
    let base = match g.eval(z)? {
        Extended::Finite(v) => v,
        Extended::Infinity => return Err(Error::NotInDomain),
    };
    match g.eval(&z.axpy(t, w))? {
        Extended::Infinity => Ok(Extended::Infinity),
        Extended::Finite(v) => {
            let num = v - base - t * lambda.dot(w);
            Ok(Extended::Finite(num * int(2) / (t * t)))
        }
    }
}

/// A set with exact membership that can produce members near a given member.
pub trait SampleableSet {
    fn dim(&self) -> usize;
    fn contains(&self, x: &RVec) -> bool;
    /// A member within distance `radius` of the member `x`.
    fn sample_near(&self, x: &RVec, radius: &Scalar, s: &mut Sampler) -> Result<RVec>;
}

/// `gph ∂g` as a subset of `R^m × R^m`, sampled through the proximal mapping.
pub struct SubdifferentialGraph<'a>(pub &'a PolyhedralFunc);

impl SampleableSet for SubdifferentialGraph<'_> {
    fn dim(&self) -> usize {
        2 * self.0.dim()
    }

    fn contains(&self, x: &RVec) -> bool {
        let m = self.0.dim();
        x.dim() == 2 * m && self.0.graph_membership(&x.slice(0, m), &x.slice(m, 2 * m))
    }

    fn sample_near(&self, x: &RVec, radius: &Scalar, s: &mut Sampler) -> Result<RVec> {
        let m = self.0.dim();
        let (z, lambda) = (x.slice(0, m), x.slice(m, 2 * m));
        let (w, u) = sample_graph_offset(self.0, &z, &lambda, radius, s)?;
        Ok(z.add(&w).concat(&lambda.add(&u)))
    }
}

/// A polyhedron sampled by projecting perturbed points onto it.
pub struct SampledPolyhedron {
    set: HPolyhedron,
    indicator: PolyhedralFunc,
}

impl SampledPolyhedron {
    pub fn new(set: HPolyhedron) -> Result<Self> {
        let indicator = PolyhedralFunc::indicator(&set)?;
        Ok(SampledPolyhedron { set, indicator })
    }
}

impl SampleableSet for SampledPolyhedron {
    fn dim(&self) -> usize {
        self.set.dim
    }

    fn contains(&self, x: &RVec) -> bool {
        self.set.contains(x)
    }

    fn sample_near(&self, x: &RVec, radius: &Scalar, s: &mut Sampler) -> Result<RVec> {
        let delta = s.in_l1_ball(self.set.dim, radius);
        Ok(prox(&self.indicator, &Scalar::one(), &x.add(&delta))?.y)
    }
}

fn scales(levels: usize) -> impl Iterator<Item = Scalar> {
    (1..=levels).map(|k| Scalar::new(1.into(), num::pow(num::BigInt::from(2), k)))
}

const LEVELS: usize = 8;

/// Directions `(ω - x)/t` for members `ω` within `t * radius` of `x`, at scales
/// `t = 2^-1, ..., 2^-8`; `count` draws per scale.
pub fn sampled_tangent_cone(set: &dyn SampleableSet, x: &RVec, spec: &SampleSpec) -> Result<Vec<RVec>> {
    let mut s = spec.sampler();
    let mut out = Vec::new();
    for t in scales(LEVELS) {
        let r = &t * &spec.radius;
        for _ in 0..spec.count {
            let omega = set.sample_near(x, &r, &mut s)?;
            debug_assert!(set.contains(&omega));
            out.push(omega.sub(x).scale(&(Scalar::one() / &t)));
        }
    }
    Ok(out)
}

/// Directions `(ω - x')/t` with both `x'` and `ω` members near `x`.
pub fn sampled_paratingent(set: &dyn SampleableSet, x: &RVec, spec: &SampleSpec) -> Result<Vec<RVec>> {
    let mut s = spec.sampler();
    let mut out = Vec::new();
    for t in scales(LEVELS) {
        let r = &t * &spec.radius;
        for _ in 0..spec.count {
            let base = set.sample_near(x, &spec.radius, &mut s)?;
            let omega = set.sample_near(&base, &r, &mut s)?;
            out.push(omega.sub(&base).scale(&(Scalar::one() / &t)));
        }
    }
    Ok(out)
}

/// Regular normals `(u, w) ∈ K'° × K'` at graph points `(z', lambda')` near
/// `(z, lambda)`, the ingredients of limiting normals at `(z, lambda)`.
pub fn sampled_regular_normals(g: &PolyhedralFunc, z: &RVec, lambda: &RVec, spec: &SampleSpec) -> Result<Vec<RVec>> {
    let mut s = spec.sampler();
    let mut out = Vec::new();
    for _ in 0..spec.count {
        let (w, u) = sample_graph_offset(g, z, lambda, &spec.radius, &mut s)?;
        let k = critical_cone(g, &z.add(&w), &lambda.add(&u))?.cone;
        let normal = k.polar().product(&k);
        out.push(s.in_cone(&normal));
    }
    Ok(out)
}

/// Central differences: column `j` is `(f(x + h e_j) - f(x - h e_j)) / 2h`.
pub fn finite_diff<F>(f: F, x: &[f64], h: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let n = x.len();
    let rows = f(x)?.len();
    let mut out = DMatrix::zeros(rows, n);
    for j in 0..n {
        let mut plus = x.to_vec();
        let mut minus = x.to_vec();
        plus[j] += h;
        minus[j] -= h;
        let (fp, fm) = (f(&plus)?, f(&minus)?);
        for i in 0..rows {
            out[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    Ok(out)
}

/// Largest observed ratio `dist(x', S(y)) / dist(y, G(x'))` over `y` in a grid
/// of radius `spec.radius` around 0 and `x'` in the domain near `x`, where
/// `G = psi + ∂g` and `S(y)` is taken to be the Newton localization `σ(y)`.
/// Returns `f64::INFINITY` when some `S(y)` cannot be computed.
pub fn mr_probe(p: &GEProblem, x: &[f64], spec: &SampleSpec) -> Result<f64> {
    let mut s = spec.sampler();
    let m = p.m;
    check_dim(m, x.len())?;
    let xr = RVec::new(x.iter().map(|&v| rationalize(v, 1e-12)).collect());
    let domain = SampledPolyhedron::new(p.g.domain())?;
    let mut kappa: f64 = 0.0;
    for _ in 0..spec.count {
        let y = s.in_l1_ball(m, &spec.radius).to_f64s();
        let sigma = match solve_localization(p, &y, x) {
            Ok(sol) => sol.x,
            Err(Error::NoConvergence { .. }) => return Ok(f64::INFINITY),
            Err(e) => return Err(e),
        };
        let probe = domain.sample_near(&xr, &spec.radius, &mut s)?.to_f64s();
        let num: f64 = probe.iter().zip(&sigma).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let psi = (p.psi)(&probe);
        let target: Vec<f64> = y.iter().zip(&psi).map(|(a, b)| a - b).collect();
        let den = distance_to_subdifferential(&p.g, &probe, &target)?;
        if num > 1e-12 {
            if den <= 1e-15 {
                return Ok(f64::INFINITY);
            }
            kappa = kappa.max(num / den);
        }
    }
    Ok(kappa)
}

/// A random polyhedral function with a few graph pairs at one base point.
#[derive(Debug, Clone)]
pub struct Instance {
    pub seed: u64,
    pub g: PolyhedralFunc,
    pub pairs: Vec<(RVec, RVec)>,
}

/// `m <= 4`, at most 4 pieces and 4 constraints with integer coefficients in
/// `[-2, 2]`, a base point `z0` with several pieces tied and most constraints
/// tight, and three subgradients at `z0`: the barycentric relative interior
/// point, a vertex `a_j`, and a mixed point between them.
pub fn random_instance(seed: u64) -> Result<Instance> {
    let mut s = Sampler::new(seed, 4);
    let m = s.integer(1, 4) as usize;
    let z0 = s.vector(m);
    let coeffs = |s: &mut Sampler| -> RVec { (0..m).map(|_| int(s.integer(-2, 2))).collect() };

    let n_pieces = s.integer(1, 4) as usize;
    let mut pieces = Vec::new();
    for j in 0..n_pieces {
        let a = coeffs(&mut s);
        let at_z0 = a.dot(&z0);
        let alpha = if j == 0 || s.coin(0.6) {
            at_z0
        } else {
            at_z0 + int(1) + s.nonneg()
        };
        pieces.push((a, alpha));
    }

    let n_constraints = s.integer(0, 4) as usize;
    let mut constraints = Vec::new();
    for _ in 0..n_constraints {
        let mut b = coeffs(&mut s);
        if b.is_zero() {
            b = RVec::unit(m, s.index(m));
        }
        let at_z0 = b.dot(&z0);
        let beta = if s.coin(0.75) { at_z0 } else { at_z0 + int(1) };
        constraints.push((b, beta));
    }

    let g = PolyhedralFunc::from_parts(m, pieces, constraints)?;
    let active = g.active_sets(&z0)?;
    let a = |j: usize| g.pieces()[j].a.clone();
    let b = |i: usize| g.constraints()[i].b.clone();

    let mut centroid = RVec::zeros(m);
    for &j in &active.pieces {
        centroid = centroid.add(&a(j));
    }
    centroid = centroid.scale(&frac(1, active.pieces.len() as i64));
    let mut ri = centroid.clone();
    for &i in &active.constraints {
        ri = ri.add(&b(i));
    }

    let vertex = a(active.pieces[0]);

    let last = *active.pieces.last().unwrap();
    let mut mixed = vertex.add(&a(last)).scale(&frac(1, 2));
    if let Some(&i) = active.constraints.first() {
        mixed = mixed.add(&b(i));
    }

    let pairs = vec![(z0.clone(), ri), (z0.clone(), vertex), (z0, mixed)];
    for (z, l) in &pairs {
        debug_assert!(g.graph_membership(z, l));
    }
    Ok(Instance { seed, g, pairs })
}

/// Instances for seeds `base..base + count`.
pub fn corpus(base: u64, count: usize) -> Result<Vec<Instance>> {
    (0..count as u64).map(|k| random_instance(base + k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::second_order::GraphDerivativeRep;
    use polyvar_geometry::ConeUnion;

    #[test]
    fn quotient_examples() {
        let abs = PolyhedralFunc::abs();
        let (z, one, zero) = (RVec::from_ints(&[0]), RVec::from_ints(&[1]), RVec::from_ints(&[0]));
        for t in [frac(1, 2), frac(1, 8), frac(1, 1000)] {
            assert_eq!(second_diff_quotient(&abs, &z, &one, &t, &one).unwrap(), Extended::Finite(int(0)));
        }
        let t = frac(1, 8);
        assert_eq!(second_diff_quotient(&abs, &z, &one, &t, &one.neg()).unwrap(), Extended::Finite(int(32)));
        assert_eq!(second_diff_quotient(&abs, &z, &zero, &t, &one).unwrap(), Extended::Finite(int(16)));
        let orthant = PolyhedralFunc::from_parts(1, vec![(zero.clone(), int(0))], vec![(one.neg(), int(0))]).unwrap();
        assert_eq!(second_diff_quotient(&orthant, &z, &zero, &t, &one.neg()).unwrap(), Extended::Infinity);
    }

    #[test]
    fn sampled_cones_lie_in_exact_cones() {
        let quadrant = HPolyhedron::new(2, vec![(RVec::from_ints(&[-1, 0]), int(0)), (RVec::from_ints(&[0, -1]), int(0))], vec![]).unwrap();
        let set = SampledPolyhedron::new(quadrant).unwrap();
        let spec = SampleSpec::new(10, int(1), 3);
        let k = PolyCone::from_generators(2, &[RVec::from_ints(&[1, 0]), RVec::from_ints(&[0, 1])], &[]).unwrap();
        for d in sampled_tangent_cone(&set, &RVec::zeros(2), &spec).unwrap() {
            assert!(k.contains(&d));
        }

        let abs = PolyhedralFunc::abs();
        let base = RVec::from_ints(&[0, 1]);
        let spec = SampleSpec::new(10, frac(1, 2), 5);
        let graph = SubdifferentialGraph(&abs);
        let rep = GraphDerivativeRep::new(PolyCone::from_generators(1, &[RVec::from_ints(&[1])], &[]).unwrap()).unwrap();
        for d in sampled_tangent_cone(&graph, &base, &spec).unwrap() {
            assert!(rep.contains(&d.slice(0, 1), &d.slice(1, 2)));
        }
        for d in sampled_paratingent(&graph, &base, &spec).unwrap() {
            assert!(rep.difference_contains(&d.slice(0, 1), &d.slice(1, 2)));
        }
        let lim: ConeUnion = crate::second_order::limiting_normal_cone(&abs, &base.slice(0, 1), &base.slice(1, 2)).unwrap();
        for n in sampled_regular_normals(&abs, &base.slice(0, 1), &base.slice(1, 2), &spec).unwrap() {
            assert!(lim.contains(&n));
        }
    }

    #[test]
    fn finite_diff_examples() {
        let abs = PolyhedralFunc::abs();
        let prox_at = |x: &[f64]| -> Result<Vec<f64>> {
            let xr = RVec::from_f64s(x).unwrap();
            Ok(prox(&abs, &Scalar::one(), &xr)?.y.to_f64s())
        };
        let d = finite_diff(prox_at, &[2.0], 1e-5).unwrap();
        assert!((d[(0, 0)] - 1.0).abs() < 1e-6);
        let grad = |x: &[f64]| -> Result<Vec<f64>> {
            let xr = RVec::from_f64s(x).unwrap();
            Ok(crate::prox::envelope_gradient(&abs, &Scalar::one(), &xr)?.to_f64s())
        };
        let d = finite_diff(grad, &[0.5], 1e-5).unwrap();
        assert!((d[(0, 0)] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn corpus_pairs_are_on_the_graph() {
        for inst in corpus(0, 30).unwrap() {
            assert!(inst.g.dim() <= 4 && inst.g.pieces().len() <= 4 && inst.g.constraints().len() <= 4);
            for (z, l) in &inst.pairs {
                assert!(inst.g.graph_membership(z, l), "seed {}", inst.seed);
            }
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let mut a = Sampler::new(9, 16);
        let mut b = Sampler::new(9, 16);
        assert_eq!(a.vector(5), b.vector(5));
        assert!(int(0) <= a.nonneg());
    }
}
