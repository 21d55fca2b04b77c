//! Exact rational polyhedral geometry: scalars and vectors, linear programs,
//! the double description method, cones with their polars and faces, and
//! projections.

pub mod caps;
pub mod cone;
pub mod dd;
pub mod error;
pub mod faces;
pub mod linalg;
pub mod lp;
pub mod polyhedron;
pub mod project;
pub mod scalar;

pub use caps::Caps;
pub use cone::{covered_by, ConeHRep, ConeUnion, PolyCone};
pub use dd::{cone_generators, ConeGens};
pub use error::{GeometryError, Result};
pub use faces::{face_containing_in_ri, faces};
pub use lp::{LinearProgram, LpOutcome};
pub use polyhedron::{HPolyhedron, VPolyhedron};
pub use project::project;
pub use scalar::{format_scalar, frac, int, parse_scalar, RVec, Scalar};
