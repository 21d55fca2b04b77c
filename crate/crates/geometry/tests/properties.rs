use num::{Signed, Zero};
use polyvar_geometry::linalg::solve_unique;
use polyvar_geometry::{faces, frac, int, project, HPolyhedron, PolyCone, RVec, Scalar};
use proptest::prelude::*;

fn small_vec(dim: usize) -> impl Strategy<Value = RVec> {
    prop::collection::vec(-2i64..=2, dim).prop_map(|v| RVec::from_ints(&v))
}

fn rows(dim: usize, max: usize) -> impl Strategy<Value = Vec<RVec>> {
    prop::collection::vec(small_vec(dim), 0..=max)
}

fn grid(dim: usize) -> Vec<RVec> {
    let vals: Vec<Scalar> = (-4..=4).map(|k| frac(k, 2)).collect();
    let mut out = vec![RVec::zeros(0)];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    out
}

/// Vertices of a bounded polyhedron by solving every square subsystem of
/// tight constraints; independent of the double description code.
fn brute_force_vertices(p: &HPolyhedron) -> Vec<RVec> {
    let n = p.inequalities.len();
    let d = p.dim;
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..d).collect();
    if n < d {
        return out;
    }
    loop {
        let a: Vec<RVec> = idx.iter().map(|&i| p.inequalities[i].0.clone()).collect();
        let b: Vec<Scalar> = idx.iter().map(|&i| p.inequalities[i].1.clone()).collect();
        if let Some(x) = solve_unique(&a, &b) {
            if p.contains(&x) {
                out.push(x);
            }
        }
        // next combination
        let mut k = d;
        while k > 0 && idx[k - 1] == n - d + k - 1 {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        idx[k - 1] += 1;
        for j in k..d {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out.sort();
    out.dedup();
    out
}

fn boxed(dim: usize, extra: &[(RVec, Scalar)]) -> HPolyhedron {
    let mut ineqs: Vec<(RVec, Scalar)> = Vec::new();
    for i in 0..dim {
        ineqs.push((RVec::unit(dim, i), int(2)));
        ineqs.push((RVec::unit(dim, i).neg(), int(2)));
    }
    ineqs.extend(extra.iter().cloned());
    HPolyhedron::new(dim, ineqs, vec![]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn h_to_v_to_h_round_trip(
        (dim, cons) in (1usize..=2).prop_flat_map(|d| (Just(d), prop::collection::vec((small_vec(d), -2i64..=2), 0..=4)))
    ) {
        let extra: Vec<(RVec, Scalar)> = cons.into_iter().map(|(c, d)| (c, int(d))).collect();
        let h = boxed(dim, &extra);
        let v = h.to_v().unwrap();
        let h2 = v.to_h().unwrap();
        for x in grid(dim) {
            prop_assert_eq!(h.contains(&x), h2.contains(&x));
            prop_assert_eq!(h.contains(&x), v.contains(&x));
        }
    }

    #[test]
    fn vertices_match_brute_force(
        cons in prop::collection::vec((small_vec(2), -2i64..=2), 0..=4)
    ) {
        let extra: Vec<(RVec, Scalar)> = cons.into_iter().map(|(c, d)| (c, int(d))).collect();
        let h = boxed(2, &extra);
        let v = h.to_v().unwrap();
        prop_assert!(v.rays.is_empty());
        prop_assert_eq!(v.points, brute_force_vertices(&h));
    }

    #[test]
    fn polar_is_an_involution(dim in 1usize..=3, seed in rows(3, 5)) {
        let gens: Vec<RVec> = seed.iter().map(|r| r.slice(0, dim)).collect();
        let k = PolyCone::from_generators(dim, &gens, &[]).unwrap();
        prop_assert!(k.polar().polar().set_eq(&k));
        for g in &gens {
            prop_assert!(k.contains(g));
            for c in k.polar().rays() {
                prop_assert!(!c.dot(g).is_positive());
            }
        }
        prop_assert!(k.contains(&RVec::zeros(dim)));
    }

    #[test]
    fn projection_satisfies_moreau(ineqs in rows(3, 4), x in small_vec(3)) {
        let k = PolyCone::from_halfspaces(3, &ineqs, &[]).unwrap();
        let p = project(&k, &x).unwrap();
        let q = project(&k.polar(), &x).unwrap();
        prop_assert!(k.contains(&p));
        prop_assert!(k.polar().contains(&q));
        prop_assert_eq!(p.add(&q), x);
        prop_assert!(p.dot(&q).is_zero());
    }

    #[test]
    fn face_lattice_is_consistent(ineqs in rows(3, 4)) {
        let k = PolyCone::from_halfspaces(3, &ineqs, &[]).unwrap();
        let fs = faces(&k).unwrap();
        let lin = PolyCone::subspace(3, k.lineality_basis()).unwrap();
        prop_assert!(fs[0].set_eq(&lin));
        prop_assert!(fs.last().unwrap().set_eq(&k));
        for f in &fs {
            prop_assert!(lin.is_subset_of(f));
            prop_assert!(f.is_subset_of(&k));
            // every face is exposed by a polar vector: F = K ∩ [v]^⊥ with v in ri(K* ∩ F^⊥)
            let v = k.conjugate_face(f).unwrap().relative_interior_point();
            prop_assert!(k.intersect_hyperplane(&v).unwrap().set_eq(f));
        }
        for a in &fs {
            for b in &fs {
                if a.is_subset_of(b) && b.is_subset_of(a) {
                    prop_assert!(a.set_eq(b));
                }
            }
        }
        // relative interiors partition the cone
        for x in grid(3).into_iter().step_by(7) {
            let n = fs.iter().filter(|f| f.ri_contains(&x)).count();
            prop_assert_eq!(n, usize::from(k.contains(&x)));
        }
    }

    #[test]
    fn ri_of_origin_iff_subspace(ineqs in rows(2, 3), eqs in rows(2, 1)) {
        let k = PolyCone::from_halfspaces(2, &ineqs, &eqs).unwrap();
        prop_assert_eq!(k.ri_contains(&RVec::zeros(2)), k.is_subspace());
    }

    #[test]
    fn polyhedron_ri_implies_membership(
        cons in prop::collection::vec((small_vec(2), -2i64..=2), 0..=3),
        eq in prop::option::of((small_vec(2), -1i64..=1)),
    ) {
        let extra: Vec<(RVec, Scalar)> = cons.into_iter().map(|(c, d)| (c, int(d))).collect();
        let mut h = boxed(2, &extra);
        if let Some((c, d)) = eq {
            h.equalities.push((c, int(d)));
        }
        if h.is_empty() {
            return Ok(());
        }
        for x in grid(2) {
            if h.ri_contains(&x).unwrap() {
                prop_assert!(h.contains(&x));
            }
        }
        // the average of the vertices lies in the relative interior
        let v = h.to_v().unwrap();
        let n = int(v.points.len() as i64);
        let centroid = v.points.iter().fold(RVec::zeros(2), |acc, p| acc.add(p)).scale(&(int(1) / n));
        prop_assert!(h.ri_contains(&centroid).unwrap());
        prop_assert!(v.ri_contains(&centroid).unwrap());
    }
}
