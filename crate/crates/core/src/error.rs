use polyvar_geometry::GeometryError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimMismatch { expected: usize, actual: usize },
    #[error("point is not in the domain of the function")]
    NotInDomain,
    #[error("lambda is not a subgradient at z")]
    NotSubgradient,
    #[error("capacity exceeded: {what} is {actual}, limit {limit}")]
    CapExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("no radius down to 2^-20 passed: {0}")]
    CertificationFailed(String),
    #[error("pair is not within the reduction radius of the base pair")]
    OutOfRadius,
    #[error("cones are not a nested pair of faces of the critical cone")]
    NotAFacePair,
    #[error("the proximal mapping is not smooth at this point")]
    NotSmoothHere,
    #[error("point is not a solution: distance {distance:e} to the subdifferential")]
    NotSolution { distance: f64 },
    #[error("solution is degenerate: -psi(x) is not in the relative interior of the subdifferential")]
    DegenerateSolution,
    #[error("Newton iteration did not converge in {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("not a KKT point: {0}")]
    NotKKTPoint(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid input: {0}")]
    Parse(String),
    #[error(transparent)]
    Geometry(GeometryError),
}

impl From<GeometryError> for Error {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::CapExceeded { what, actual, limit } => Error::CapExceeded { what, actual, limit },
            GeometryError::DimMismatch { expected, actual } => Error::DimMismatch { expected, actual },
            GeometryError::Parse(s) => Error::Parse(s),
            other => Error::Geometry(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimMismatch { expected, actual })
    }
}
