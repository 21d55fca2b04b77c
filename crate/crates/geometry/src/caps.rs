//! Size limits for the combinatorial routines.

use std::sync::RwLock;

use crate::error::{GeometryError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Ambient dimension accepted by the double description conversions.
    pub max_dim: usize,
    /// Number of inequalities plus equalities (or points plus rays) per conversion.
    pub max_constraints: usize,
    /// Facet count above which face enumeration refuses to run.
    pub max_face_halfspaces: usize,
    /// Pieces plus constraints accepted by the exhaustive prox QP.
    pub max_qp_terms: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_dim: 8,
            max_constraints: 24,
            max_face_halfspaces: 20,
            max_qp_terms: 20,
        }
    }
}

static CURRENT: RwLock<Option<Caps>> = RwLock::new(None);

impl Caps {
    /// Limits in effect for this process (the defaults unless overridden).
    pub fn current() -> Caps {
        CURRENT
            .read()
            .map(|c| c.unwrap_or_default())
            .unwrap_or_default()
    }

    /// Overrides the process-wide limits. Intended for front ends at startup.
    pub fn install(self) {
        if let Ok(mut slot) = CURRENT.write() {
            *slot = Some(self);
        }
    }

    pub fn check(what: &'static str, actual: usize, limit: usize) -> Result<()> {
        if actual > limit {
            Err(GeometryError::CapExceeded {
                what,
                actual,
                limit,
            })
        } else {
            Ok(())
        }
    }
}
