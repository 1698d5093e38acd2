//! Dependency graphs of the self-referential families and what can be
//! recovered from partial views of them.

mod deduce;
mod dependency;
pub mod scenario;

pub use deduce::{deduce, deducible_closure};
pub use dependency::{leaf_expansion, DepFamily, DependencyGraph, DependencyNode, LeafExpansion};
pub use scenario::{reconstruction_roundtrip, Mismatch, ReconstructionReport, ScenarioConfig, ScenarioKind, Stage};

use crate::sequence::SequenceError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReconError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}
