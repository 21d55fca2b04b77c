pub mod error;
pub mod expr;
pub mod geneq;
pub mod oracle;
pub mod polyfunc;
pub mod prox;
pub mod second_order;

pub use error::{Error, Result};
pub use geneq::{GEProblem, KKTProblem, LocalizationResult, MrCriteria, RegularityStatus};
pub use oracle::{SampleSpec, Sampler};
pub use polyfunc::{ActiveSets, Decomposition, DecompositionSet, Extended, PolyhedralFunc, SubgradientPair};
pub use prox::{ProxResult, Smoothness};
pub use second_order::{CriticalCone, GraphDerivativeRep, ReductionCertificate, RegularityReport};
pub use polyvar_geometry as geometry;
