use num::Signed;
use nalgebra::DMatrix;
use polyvar::geneq::{natural_map, newton_element};
use polyvar::geometry::linalg::identity;
use polyvar::geometry::{frac, int, PolyCone, RVec, Scalar};
use polyvar::oracle::{finite_diff, random_instance, Sampler};
use polyvar::prox::{prox, prox_derivatives, smoothness_classify};
use polyvar::second_order::{
    critical_cone, critical_cone_from_decomposition, graphical_derivative_membership, is_ri_subgradient,
    limiting_normal_cone, reduction_certify, regular_normal_cone, regularity_report, sample_graph_offset,
    second_subderivative, strict_graphical_derivative_membership, strict_second_subderivative,
};
use polyvar::{Extended, GEProblem, PolyhedralFunc, Smoothness};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(32)
}

fn rational() -> impl Strategy<Value = Scalar> {
    (-40i64..=40, 1i64..=8).prop_map(|(p, q)| frac(p, q))
}

fn positive() -> impl Strategy<Value = Scalar> {
    (1i64..=16, 1i64..=8).prop_map(|(p, q)| frac(p, q))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn critical_cone_independent_of_decomposition(seed in 0u64..100_000) {
        let inst = random_instance(seed).unwrap();
        for (z, l) in &inst.pairs {
            let pair = inst.g.subgradient_pair(z, l).unwrap();
            let k = critical_cone(&inst.g, z, l).unwrap().cone;
            let all = inst.g.decompose_all(z, l).unwrap();
            for d in &all.vertices {
                let kd = critical_cone_from_decomposition(&inst.g, &pair, d).unwrap();
                prop_assert!(kd.set_eq(&k));
            }
        }
    }

    #[test]
    fn soft_threshold(x in rational(), r in positive()) {
        let y = prox(&PolyhedralFunc::abs(), &r, &RVec::new(vec![x.clone()])).unwrap().y;
        let shrunk = if x.abs() > r { x.abs() - &r } else { int(0) };
        let expected = if x < int(0) { -shrunk } else { shrunk };
        prop_assert_eq!(&y[0], &expected);
    }

    #[test]
    fn prox_is_nonexpansive_and_resolvent(seed in 0u64..100_000, r in positive()) {
        let inst = random_instance(seed).unwrap();
        let m = inst.g.dim();
        let mut s = Sampler::new(seed, 8);
        let x1 = s.vector(m).scale(&int(3));
        let x2 = s.vector(m).scale(&int(3));
        let p1 = prox(&inst.g, &r, &x1).unwrap();
        let p2 = prox(&inst.g, &r, &x2).unwrap();
        prop_assert!(p1.y.sub(&p2.y).norm_sq() <= x1.sub(&x2).norm_sq());
        prop_assert!(inst.g.graph_membership(&p1.y, &p1.v));
        prop_assert_eq!(p1.y.axpy(&r, &p1.v), x1);
    }

    #[test]
    fn envelope_hessian_identity(seed in 0u64..100_000, r in positive()) {
        let inst = random_instance(seed).unwrap();
        let m = inst.g.dim();
        let mut s = Sampler::new(seed ^ 1, 8);
        let x = s.vector(m).scale(&int(2));
        if smoothness_classify(&inst.g, &r, &x).unwrap() == Smoothness::C1Near {
            let d = prox_derivatives(&inst.g, &r, &x).unwrap();
            for (i, row) in identity(m).iter().enumerate() {
                prop_assert_eq!(&d.hessian[i].scale(&r).add(&d.jacobian[i]), row);
            }
        }
    }

    #[test]
    fn graphical_derivative_inside_strict(seed in 0u64..100_000) {
        let inst = random_instance(seed).unwrap();
        let mut s = Sampler::new(seed ^ 2, 8);
        for (z, l) in &inst.pairs {
            let k = critical_cone(&inst.g, z, l).unwrap().cone;
            let w = s.in_cone(&k);
            let u = s.in_cone(&k.polar());
            if u.dot(&w) == int(0) {
                prop_assert!(graphical_derivative_membership(&inst.g, z, l, &w, &u).unwrap());
                prop_assert!(strict_graphical_derivative_membership(&inst.g, z, l, &w, &u).unwrap());
            }
            let zero = RVec::zeros(inst.g.dim());
            prop_assert!(strict_graphical_derivative_membership(&inst.g, z, l, &w, &zero).unwrap());
        }
    }

    #[test]
    fn regular_normals_inside_limiting(seed in 0u64..100_000) {
        let inst = random_instance(seed).unwrap();
        let mut s = Sampler::new(seed ^ 3, 8);
        for (z, l) in &inst.pairs {
            let regular = regular_normal_cone(&inst.g, z, l).unwrap();
            let limiting = limiting_normal_cone(&inst.g, z, l).unwrap();
            for _ in 0..4 {
                prop_assert!(limiting.contains(&s.in_cone(&regular)));
            }
            for r in regular.rays().iter().chain(regular.lineality_basis()) {
                prop_assert!(limiting.contains(r));
            }
        }
    }

    #[test]
    fn second_subderivative_dominates_strict(seed in 0u64..100_000) {
        let inst = random_instance(seed).unwrap();
        let mut s = Sampler::new(seed ^ 4, 8);
        for (z, l) in &inst.pairs {
            let k = critical_cone(&inst.g, z, l).unwrap().cone;
            for w in [s.vector(inst.g.dim()), s.in_cone(&k)] {
                let d2 = second_subderivative(&inst.g, z, l, &w).unwrap();
                let d2s = strict_second_subderivative(&inst.g, z, l, &w).unwrap();
                prop_assert!(d2 >= d2s);
            }
        }
    }

    #[test]
    fn regularity_flags_agree(seed in 0u64..100_000) {
        let inst = random_instance(seed).unwrap();
        for (z, l) in &inst.pairs {
            let report = regularity_report(&inst.g, z, l).unwrap();
            prop_assert!(report.consistent(), "{:?}", report.flags());
        }
    }

    #[test]
    fn nearby_critical_cones(seed in 0u64..100_000) {
        let inst = random_instance(seed).unwrap();
        let mut s = Sampler::new(seed ^ 6, 8);
        for (z, l) in &inst.pairs {
            let k = critical_cone(&inst.g, z, l).unwrap().cone;
            let ri = is_ri_subgradient(&inst.g, z, l).unwrap();
            let radius = reduction_certify(&inst.g, z, l, 40, seed).unwrap().radius;
            let lineality = PolyCone::subspace(k.dim(), k.lineality_basis()).unwrap();
            let span = k.difference(&k).unwrap();
            for _ in 0..4 {
                let (w, u) = sample_graph_offset(&inst.g, z, l, &(&radius / int(2)), &mut s).unwrap();
                let (z2, l2) = (z.add(&w), l.add(&u));
                let k2 = critical_cone(&inst.g, &z2, &l2).unwrap().cone;
                prop_assert!(lineality.is_subset_of(&k2) && k2.is_subset_of(&span));
                if ri {
                    prop_assert!(k2.set_eq(&k));
                    prop_assert!(is_ri_subgradient(&inst.g, &z2, &l2).unwrap());
                }
            }
        }
    }

    #[test]
    fn fenchel_young(seed in 0u64..100_000) {
        let inst = random_instance(seed).unwrap();
        let conj = inst.g.conjugate().unwrap();
        let mut s = Sampler::new(seed ^ 7, 4);
        for (z, l) in &inst.pairs {
            for lam in [l.clone(), l.add(&s.vector(inst.g.dim()).scale(&frac(1, 2)))] {
                let sum = match (inst.g.eval(z).unwrap(), conj.eval(&lam).unwrap()) {
                    (Extended::Finite(a), Extended::Finite(b)) => Some(a + b),
                    _ => None,
                };
                prop_assert_eq!(inst.g.graph_membership(z, &lam), sum == Some(lam.dot(z)));
            }
        }
    }

    #[test]
    fn newton_element_matches_finite_differences(seed in 0u64..100_000, diag in 1i64..4) {
        let inst = random_instance(seed).unwrap();
        let m = inst.g.dim();
        let mut s = Sampler::new(seed ^ 5, 8);
        let a = DMatrix::<f64>::from_fn(m, m, |i, j| if i == j { diag as f64 } else { 0.0 })
            + DMatrix::<f64>::from_fn(m, m, |_, _| RVec::new(vec![s.rational()]).to_f64s()[0] / 4.0);
        let c: Vec<f64> = s.vector(m).to_f64s();
        let p = GEProblem::affine(inst.g.clone(), a.clone(), c.clone());
        let x = s.vector(m).scale(&int(2));
        let xf = x.to_f64s();
        let y = vec![0.0; m];
        let psi: Vec<f64> = (0..m).map(|i| (0..m).map(|j| a[(i, j)] * xf[j]).sum::<f64>() + c[i]).collect();
        let arg: Vec<f64> = (0..m).map(|i| xf[i] - psi[i]).collect();
        let arg = RVec::from_f64s(&arg).unwrap();
        if smoothness_classify(&inst.g, &int(1), &arg).unwrap() == Smoothness::C1Near {
            let j = newton_element(&p, &xf, &y).unwrap();
            let fd = finite_diff(|x| natural_map(&p, x, &y), &xf, 1e-6).unwrap();
            prop_assert!((j - fd).abs().max() <= 1e-5);
        }
    }
}
