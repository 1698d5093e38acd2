//! Index sets and closed-form constants from the analysis, with set-level checks.

pub mod bounds;
mod index_set;
mod masked;
pub mod ratios;
pub mod report;
pub mod sets;

pub use bounds::{beta, bound_evaluators, delta1, delta2, log2_growth, rho1, rho2, Bounds};
pub use index_set::IndexSet;
pub use masked::{MaskedString, PLACEHOLDER};
pub use ratios::{disjointness_check, ratio_constants, Disjointness, RatioConstants, RatioSummary};
pub use report::{Claim, IndexSetReport, Verdict};
pub use sets::{
    closure, hier_leaf_set, oblivious_gamma, overwritten_set_a, phi_epoch, phi_ref_set, phi_ref_sets, residue_class,
    u_adaptive, u_oblivious, ObliviousGamma, RefSets,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("trace does not cover step {0}")]
    TraceTooShort(u64),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}
