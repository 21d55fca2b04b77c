use polyvar_geometry::{faces, frac, int, GeometryError, HPolyhedron, PolyCone, RVec};

fn v(xs: &[i64]) -> RVec {
    RVec::from_ints(xs)
}

#[test]
fn polar_examples() {
    let r_plus = PolyCone::from_generators(1, &[v(&[1])], &[]).unwrap();
    let r_minus = PolyCone::from_generators(1, &[v(&[-1])], &[]).unwrap();
    assert!(r_plus.polar().set_eq(&r_minus));

    let diag = PolyCone::subspace(2, &[v(&[1, 1])]).unwrap();
    let anti = PolyCone::subspace(2, &[v(&[1, -1])]).unwrap();
    assert!(diag.polar().set_eq(&anti));

    assert!(PolyCone::zero(2).polar().set_eq(&PolyCone::whole(2)));
}

#[test]
fn subspace_examples() {
    assert!(PolyCone::subspace(2, &[v(&[1, 1])]).unwrap().is_subspace());
    assert!(!PolyCone::from_generators(1, &[v(&[1])], &[]).unwrap().is_subspace());
    assert!(PolyCone::zero(3).is_subspace());
}

#[test]
fn cone_arithmetic_examples() {
    let r_plus = PolyCone::from_generators(1, &[v(&[1])], &[]).unwrap();
    assert!(r_plus.minkowski_diff_contains(&r_plus, &v(&[-5])));

    // gph N_{R+} = A ∪ B with A = R+ x {0}, B = {0} x R-
    let a = PolyCone::from_generators(2, &[v(&[1, 0])], &[]).unwrap();
    let b = PolyCone::from_generators(2, &[v(&[0, -1])], &[]).unwrap();
    let in_diff = |q: &RVec| [&a, &b].iter().any(|p| [&a, &b].iter().any(|s| p.minkowski_diff_contains(s, q)));
    assert!(in_diff(&v(&[1, 1])));
    assert!(!in_diff(&v(&[1, -1])));

    let line = PolyCone::subspace(3, &[v(&[1, 2, 0])]).unwrap();
    assert!(line.difference(&line).unwrap().set_eq(&line));

    let quadrant = PolyCone::from_generators(2, &[v(&[1, 0]), v(&[0, 1])], &[]).unwrap();
    let sum = quadrant.sum(&quadrant.negate()).unwrap();
    assert!(sum.set_eq(&PolyCone::whole(2)));
    let meet = quadrant.intersect(&quadrant.negate()).unwrap();
    assert!(meet.is_zero());
}

#[test]
fn tangent_cone_radius_is_certified() {
    // unit square, point on an edge: the local identity holds within the radius
    let p = HPolyhedron::new(
        2,
        vec![(v(&[1, 0]), int(1)), (v(&[-1, 0]), int(0)), (v(&[0, 1]), int(1)), (v(&[0, -1]), int(0))],
        vec![],
    )
    .unwrap();
    let x = RVec::new(vec![frac(1, 4), int(0)]);
    let (t, r) = p.tangent_cone(&x).unwrap();
    assert_eq!(r, frac(1, 4));
    for i in -8..=8 {
        for j in -8..=8 {
            let w = RVec::new(vec![frac(i, 32), frac(j, 32)]);
            if w.norm_sq() <= &r * &r {
                assert_eq!(t.contains(&w), p.contains(&x.add(&w)));
            }
        }
    }
    assert_eq!(p.tangent_cone(&v(&[2, 0])).unwrap_err(), GeometryError::NotMember);
}

#[test]
fn normal_cone_is_polar_of_tangent_cone() {
    let p = HPolyhedron::new(2, vec![(v(&[-1, 0]), int(0)), (v(&[0, -1]), int(0)), (v(&[1, 1]), int(3))], vec![]).unwrap();
    for x in [v(&[0, 0]), v(&[1, 0]), v(&[0, 3]), v(&[1, 1])] {
        let (t, _) = p.tangent_cone(&x).unwrap();
        assert!(p.normal_cone(&x).unwrap().set_eq(&t.polar()));
    }
}

#[test]
fn face_examples() {
    let r_plus = PolyCone::from_generators(1, &[v(&[1])], &[]).unwrap();
    assert_eq!(faces(&r_plus).unwrap().len(), 2);
    let quadrant = PolyCone::from_generators(2, &[v(&[1, 0]), v(&[0, 1])], &[]).unwrap();
    let fs = faces(&quadrant).unwrap();
    let expected = [
        PolyCone::zero(2),
        PolyCone::from_generators(2, &[v(&[1, 0])], &[]).unwrap(),
        PolyCone::from_generators(2, &[v(&[0, 1])], &[]).unwrap(),
        quadrant.clone(),
    ];
    assert_eq!(fs.len(), 4);
    for e in &expected {
        assert!(fs.iter().any(|f| f.set_eq(e)));
    }
}

#[test]
fn face_cap_is_enforced() {
    // cone over a 21-gon has 21 facets
    let rays: Vec<RVec> = (0..21)
        .map(|k| {
            let k = k as i64;
            RVec::from_ints(&[k, k * k - 20 * k, 1000])
        })
        .collect();
    let k = PolyCone::from_generators(3, &rays, &[]).unwrap();
    assert!(k.halfspaces().len() > 20);
    assert!(matches!(faces(&k), Err(GeometryError::CapExceeded { .. })));
}
