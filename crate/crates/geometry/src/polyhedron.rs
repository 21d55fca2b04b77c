//! Convex polyhedra in H- and V-representation and the conversions between them.

use num::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::caps::Caps;
use crate::cone::PolyCone;
use crate::dd::cone_generators;
use crate::error::{GeometryError, Result};
use crate::lp::LinearProgram;
use crate::scalar::{int, RVec, Scalar};

/// `{x : <c, x> <= d (inequalities), <c, x> = d (equalities)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HPolyhedron {
    pub dim: usize,
    pub inequalities: Vec<(RVec, Scalar)>,
    pub equalities: Vec<(RVec, Scalar)>,
}

/// `conv(points) + cone(rays)`; empty iff there are no points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolyhedron {
    pub dim: usize,
    pub points: Vec<RVec>,
    pub rays: Vec<RVec>,
}

impl HPolyhedron {
    pub fn new(
        dim: usize,
        inequalities: Vec<(RVec, Scalar)>,
        equalities: Vec<(RVec, Scalar)>,
    ) -> Result<Self> {
        for (c, _) in inequalities.iter().chain(&equalities) {
            if c.dim() != dim {
                return Err(GeometryError::DimMismatch {
                    expected: dim,
                    actual: c.dim(),
                });
            }
        }
        Ok(HPolyhedron {
            dim,
            inequalities,
            equalities,
        })
    }

    pub fn whole(dim: usize) -> Self {
        HPolyhedron {
            dim,
            inequalities: Vec::new(),
            equalities: Vec::new(),
        }
    }

    pub fn contains(&self, x: &RVec) -> bool {
        self.inequalities.iter().all(|(c, d)| c.dot(x) <= *d)
            && self.equalities.iter().all(|(c, d)| c.dot(x) == *d)
    }

    fn check_point(&self, x: &RVec) -> Result<()> {
        if x.dim() != self.dim {
            return Err(GeometryError::DimMismatch {
                expected: self.dim,
                actual: x.dim(),
            });
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.feasible_point().is_none()
    }

    pub fn feasible_point(&self) -> Option<RVec> {
        let mut lp = LinearProgram::with_free_vars(self.dim);
        for (c, d) in &self.inequalities {
            lp.add_le(c.clone(), d.clone());
        }
        for (c, d) in &self.equalities {
            lp.add_eq(c.clone(), d.clone());
        }
        lp.feasible_point()
    }

    /// Double description conversion to generators.
    pub fn to_v(&self) -> Result<VPolyhedron> {
        let caps = Caps::current();
        Caps::check("dimension", self.dim, caps.max_dim)?;
        Caps::check(
            "constraint count",
            self.inequalities.len() + self.equalities.len(),
            caps.max_constraints,
        )?;
        // Homogenize: (x, t) with t >= 0 and <c, x> - d t <= 0.
        let lift = |c: &RVec, d: &Scalar| {
            let mut v = c.clone();
            v.push(-d.clone());
            v
        };
        let mut ineqs: Vec<RVec> = self.inequalities.iter().map(|(c, d)| lift(c, d)).collect();
        let mut t_nonneg = RVec::zeros(self.dim + 1);
        t_nonneg[self.dim] = -Scalar::one();
        ineqs.push(t_nonneg);
        let eqs: Vec<RVec> = self.equalities.iter().map(|(c, d)| lift(c, d)).collect();
        let gens = cone_generators(self.dim + 1, &ineqs, &eqs);

        let mut points = Vec::new();
        let mut rays = Vec::new();
        for g in &gens.rays {
            let t = &g[self.dim];
            if t.is_positive() {
                points.push(g.slice(0, self.dim).scale(&(Scalar::one() / t)));
            } else {
                rays.push(g.slice(0, self.dim));
            }
        }
        for l in &gens.lineality {
            debug_assert!(l[self.dim].is_zero());
            let r = l.slice(0, self.dim);
            rays.push(r.neg());
            rays.push(r);
        }
        if points.is_empty() {
            rays.clear();
        }
        points.sort();
        rays.sort();
        Ok(VPolyhedron {
            dim: self.dim,
            points,
            rays,
        })
    }

    /// Tangent cone at a member point, with a rational radius `r > 0` such that
    /// `T ∩ B_r = (P - x) ∩ B_r`. The radius is the smallest slack of the
    /// non-tight inequalities divided by the l1 norm of their normals (1 when
    /// every inequality is tight).
    pub fn tangent_cone(&self, x: &RVec) -> Result<(PolyCone, Scalar)> {
        self.check_point(x)?;
        if !self.contains(x) {
            return Err(GeometryError::NotMember);
        }
        let mut tight = Vec::new();
        let mut radius: Option<Scalar> = None;
        for (c, d) in &self.inequalities {
            let slack = d - c.dot(x);
            if slack.is_zero() {
                tight.push(c.clone());
            } else if !c.is_zero() {
                let r = slack / c.norm_l1();
                radius = Some(match radius {
                    Some(best) if best <= r => best,
                    _ => r,
                });
            }
        }
        let eqs: Vec<RVec> = self.equalities.iter().map(|(c, _)| c.clone()).collect();
        let cone = PolyCone::from_halfspaces(self.dim, &tight, &eqs)?;
        Ok((cone, radius.unwrap_or_else(|| int(1))))
    }

    /// Normal cone at a member point, generated by the tight outward normals.
    pub fn normal_cone(&self, x: &RVec) -> Result<PolyCone> {
        self.check_point(x)?;
        if !self.contains(x) {
            return Err(GeometryError::NotMember);
        }
        let tight: Vec<RVec> = self
            .inequalities
            .iter()
            .filter(|(c, d)| c.dot(x) == *d)
            .map(|(c, _)| c.clone())
            .collect();
        let eqs: Vec<RVec> = self.equalities.iter().map(|(c, _)| c.clone()).collect();
        PolyCone::from_generators(self.dim, &tight, &eqs)
    }

    /// Relative interior membership. Implicit equalities are the inequalities
    /// tight at every generator point and orthogonal to every generator ray.
    pub fn ri_contains(&self, x: &RVec) -> Result<bool> {
        self.check_point(x)?;
        let v = self.to_v()?;
        Ok(ri_contains_with(self, &v, x))
    }
}

fn ri_contains_with(h: &HPolyhedron, v: &VPolyhedron, x: &RVec) -> bool {
    if v.points.is_empty() || !h.contains(x) {
        return false;
    }
    h.inequalities.iter().all(|(c, d)| {
        let implicit = v.points.iter().all(|p| c.dot(p) == *d) && v.rays.iter().all(|r| c.dot(r).is_zero());
        implicit || c.dot(x) < *d
    })
}

impl VPolyhedron {
    pub fn new(dim: usize, points: Vec<RVec>, rays: Vec<RVec>) -> Result<Self> {
        for p in points.iter().chain(&rays) {
            if p.dim() != dim {
                return Err(GeometryError::DimMismatch {
                    expected: dim,
                    actual: p.dim(),
                });
            }
        }
        Ok(VPolyhedron { dim, points, rays })
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Membership by phase-one feasibility of the convex/conic combination.
    pub fn contains(&self, x: &RVec) -> bool {
        if self.points.is_empty() {
            return false;
        }
        let n = self.points.len() + self.rays.len();
        let mut lp = LinearProgram::new(n);
        for i in 0..self.dim {
            let row: RVec = self.points.iter().chain(&self.rays).map(|g| g[i].clone()).collect();
            lp.add_eq(row, x[i].clone());
        }
        let weights: RVec = (0..n)
            .map(|k| if k < self.points.len() { Scalar::one() } else { Scalar::zero() })
            .collect();
        lp.add_eq(weights, Scalar::one());
        lp.is_feasible()
    }

    /// Double description conversion to inequalities and equalities.
    pub fn to_h(&self) -> Result<HPolyhedron> {
        let caps = Caps::current();
        Caps::check("dimension", self.dim, caps.max_dim)?;
        Caps::check("generator count", self.points.len() + self.rays.len(), caps.max_constraints)?;
        if self.points.is_empty() {
            return Ok(HPolyhedron {
                dim: self.dim,
                inequalities: vec![(RVec::zeros(self.dim), -Scalar::one())],
                equalities: Vec::new(),
            });
        }
        // Valid inequalities (c, d): <c, p> - d <= 0 and <c, r> <= 0.
        let mut rows: Vec<RVec> = self
            .points
            .iter()
            .map(|p| {
                let mut v = p.clone();
                v.push(-Scalar::one());
                v
            })
            .collect();
        rows.extend(self.rays.iter().map(|r| {
            let mut v = r.clone();
            v.push(Scalar::zero());
            v
        }));
        let gens = cone_generators(self.dim + 1, &rows, &[]);
        let split = |g: &RVec| (g.slice(0, self.dim), g[self.dim].clone());
        let mut inequalities: Vec<(RVec, Scalar)> = gens
            .rays
            .iter()
            .map(split)
            .filter(|(c, _)| !c.is_zero())
            .collect();
        let mut equalities: Vec<(RVec, Scalar)> = gens.lineality.iter().map(split).collect();
        inequalities.sort();
        equalities.sort();
        Ok(HPolyhedron {
            dim: self.dim,
            inequalities,
            equalities,
        })
    }

    pub fn ri_contains(&self, x: &RVec) -> Result<bool> {
        let h = self.to_h()?;
        Ok(ri_contains_with(&h, self, x))
    }
}

#[derive(Serialize, Deserialize)]
struct HRepr {
    #[serde(default)]
    ineq: Vec<RVec>,
    #[serde(default)]
    eq: Vec<RVec>,
}

fn split_rows<E: serde::de::Error>(rows: Vec<RVec>, dim: &mut Option<usize>) -> std::result::Result<Vec<(RVec, Scalar)>, E> {
    rows.into_iter()
        .map(|r| {
            if r.dim() == 0 {
                return Err(E::custom("empty constraint row"));
            }
            let n = r.dim() - 1;
            if *dim.get_or_insert(n) != n {
                return Err(E::custom("constraint rows have different lengths"));
            }
            Ok((r.slice(0, n), r[n].clone()))
        })
        .collect()
}

impl Serialize for HPolyhedron {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let join = |(c, d): &(RVec, Scalar)| {
            let mut v = c.clone();
            v.push(d.clone());
            v
        };
        HRepr {
            ineq: self.inequalities.iter().map(join).collect(),
            eq: self.equalities.iter().map(join).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HPolyhedron {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = HRepr::deserialize(d)?;
        let mut dim = None;
        let inequalities = split_rows(raw.ineq, &mut dim)?;
        let equalities = split_rows(raw.eq, &mut dim)?;
        let dim = dim.ok_or_else(|| D::Error::custom("polyhedron has no rows; dimension unknown"))?;
        Ok(HPolyhedron {
            dim,
            inequalities,
            equalities,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct VRepr {
    points: Vec<RVec>,
    #[serde(default)]
    rays: Vec<RVec>,
}

impl Serialize for VPolyhedron {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VRepr {
            points: self.points.clone(),
            rays: self.rays.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VPolyhedron {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = VRepr::deserialize(d)?;
        let dim = raw
            .points
            .first()
            .or(raw.rays.first())
            .map(RVec::dim)
            .ok_or_else(|| D::Error::custom("polyhedron has no generators; dimension unknown"))?;
        VPolyhedron::new(dim, raw.points, raw.rays).map_err(D::Error::custom)
    }
}
