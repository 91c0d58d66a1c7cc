//! FO-index, singularities, singularity graphs and fixed subgroups of
//! positive primitive automorphisms of a free group.

pub mod analysis;
pub mod automorphism;
pub mod error;
pub mod gamma;
pub mod pss;
pub mod report;
pub mod sgraph;
pub mod singularities;
pub mod words;

pub use analysis::{analyze, verify, Analysis, Check};
pub use automorphism::{Automorphism, Candidate, Direction, IncidenceMatrix, DEFAULT_BUDGET};
pub use error::{Error, Result};
pub use gamma::{GammaBound, Match, Matcher, Side};
pub use pss::{Development, PointKey, Pss, Step, SymbolicPoint, Triplet};
pub use sgraph::{ComponentSummary, FiniteEdge, InfiniteEdge, SingularityGraph};
pub use singularities::{Label, Options, Singularity, Sweep};
pub use words::{Letter, Purity, Sign, Word};
