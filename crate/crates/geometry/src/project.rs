//! Exact Euclidean projection onto a polyhedral cone.

use crate::cone::PolyCone;
use crate::error::{GeometryError, Result};
use crate::faces::faces;
use crate::linalg::project_onto_span;
use crate::scalar::RVec;

/// `P_K(x)`. For each face `F` the candidate is the orthogonal projection of `x`
/// onto `span F`; it is the answer when it lies in `F` and the residual lies in
/// the polar cone (the residual is orthogonal to `F` by construction).
pub fn project(k: &PolyCone, x: &RVec) -> Result<RVec> {
    if x.dim() != k.dim() {
        return Err(GeometryError::DimMismatch {
            expected: k.dim(),
            actual: x.dim(),
        });
    }
    if k.is_subspace() {
        return Ok(project_onto_span(&k.span_basis(), x));
    }
    let polar = k.polar();
    for f in faces(k)? {
        let p = project_onto_span(&f.span_basis(), x);
        if f.contains(&p) && polar.contains(&x.sub(&p)) {
            return Ok(p);
        }
    }
    unreachable!("some face of a closed convex cone carries the projection")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    #[test]
    fn line_projection() {
        let k = PolyCone::subspace(2, &[RVec::from_ints(&[1, 1])]).unwrap();
        assert_eq!(project(&k, &RVec::from_ints(&[1, 0])).unwrap(), RVec::new(vec![frac(1, 2), frac(1, 2)]));
    }

    #[test]
    fn quadrant_projection() {
        let k = PolyCone::from_halfspaces(2, &[RVec::from_ints(&[-1, 0]), RVec::from_ints(&[0, -1])], &[]).unwrap();
        assert_eq!(project(&k, &RVec::from_ints(&[1, -1])).unwrap(), RVec::from_ints(&[1, 0]));
    }

    #[test]
    fn moreau_on_negative_halfline() {
        let k = PolyCone::from_generators(1, &[RVec::from_ints(&[-1])], &[]).unwrap();
        let x = RVec::new(vec![int(2)]);
        let p = project(&k, &x).unwrap();
        let q = project(&k.polar(), &x).unwrap();
        assert_eq!(p, RVec::zeros(1));
        assert_eq!(p.add(&q), x);
    }
}
