//! Face lattice of a polyhedral cone.

use std::collections::BTreeSet;

use num::Zero;

use crate::caps::Caps;
use crate::cone::PolyCone;
use crate::error::Result;
use crate::scalar::RVec;

/// All faces of `k`, from the lineality space up to `k` itself.
///
/// A face is `K ∩ {<c, x> = 0 : c in T}` for a set `T` of facet normals. Faces
/// are generated by closing tight sets under the ray/facet incidence relation:
/// starting from `K`, each facet not yet tight is added and the tight set is
/// replaced by all facets vanishing on the surviving rays. Output is sorted by
/// span dimension, then by canonical generators.
pub fn faces(k: &PolyCone) -> Result<Vec<PolyCone>> {
    let facets = k.halfspaces();
    Caps::check("cone facet count", facets.len(), Caps::current().max_face_halfspaces)?;
    let rays = k.rays();
    let incidence: Vec<Vec<bool>> = rays
        .iter()
        .map(|r| facets.iter().map(|c| c.dot(r).is_zero()).collect())
        .collect();
    let rays_of = |tight: &BTreeSet<usize>| -> Vec<usize> {
        (0..rays.len())
            .filter(|&i| tight.iter().all(|&c| incidence[i][c]))
            .collect()
    };
    let closure = |members: &[usize]| -> BTreeSet<usize> {
        (0..facets.len())
            .filter(|&c| members.iter().all(|&i| incidence[i][c]))
            .collect()
    };

    let top = closure(&(0..rays.len()).collect::<Vec<_>>());
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut stack = vec![top.clone()];
    seen.insert(top);
    while let Some(tight) = stack.pop() {
        for c in 0..facets.len() {
            if tight.contains(&c) {
                continue;
            }
            let mut next = tight.clone();
            next.insert(c);
            let closed = closure(&rays_of(&next));
            if seen.insert(closed.clone()) {
                stack.push(closed);
            }
        }
    }

    let mut out = Vec::with_capacity(seen.len());
    for tight in &seen {
        let members: Vec<RVec> = rays_of(tight).into_iter().map(|i| rays[i].clone()).collect();
        out.push(PolyCone::from_generators(k.dim(), &members, k.lineality_basis())?);
    }
    out.sort_by(|a, b| a.span_dim().cmp(&b.span_dim()).then_with(|| a.cmp(b)));
    out.dedup_by(|a, b| a.set_eq(b));
    Ok(out)
}

/// The face of `k` whose relative interior contains `x`, if `x` is in `k`.
pub fn face_containing_in_ri(k: &PolyCone, x: &RVec) -> Result<Option<PolyCone>> {
    if !k.contains(x) {
        return Ok(None);
    }
    Ok(faces(k)?.into_iter().find(|f| f.ri_contains(x)))
}
