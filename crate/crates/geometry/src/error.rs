use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("capacity exceeded: {what} is {actual}, limit {limit}")]
    CapExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimMismatch { expected: usize, actual: usize },
    #[error("point is not a member of the polyhedron")]
    NotMember,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
