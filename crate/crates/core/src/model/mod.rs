//! Gambler specifications: the stepping interface, table machines, oblivious
//! machines and their validation.

pub mod bets;
pub mod gambler;
pub mod oblivious;
pub mod specfile;
pub mod table;
mod validate;

pub use bets::BetDistribution;
pub use gambler::{Gambler, MoveMask, StateId, MAX_HEADS};
pub use oblivious::{
    direct_run, embed_oblivious, oblivious_speeds, DirectRun, ObliviousParts, ObliviousSpec, TimerCycle,
};
pub use specfile::{parse_spec, write_spec, SpecFileError};
pub use table::{TableParts, TableSpec, TransitionRule};
pub use validate::{reachable_states, validate_spec, ValidationLimits, ValidationReport};

use crate::alphabet::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("head count {0} outside 1..={MAX_HEADS}")]
    Heads(usize),
    #[error("malformed machine: {0}")]
    Structure(String),
    #[error("bet row of state {state} is not a probability distribution (sum {sum})")]
    NonStochasticBets { state: String, sum: String },
    #[error("state {state}: move mask {mask:#b} does not fit {expected} trailing heads")]
    MaskWidthMismatch { state: String, mask: u32, expected: usize },
    #[error("state {state} has no transition for observation {observed:?}")]
    PartialTransition { state: String, observed: Vec<Symbol> },
    #[error("reachable-state enumeration exceeded the cap of {cap} states")]
    UnreachableTotalityUnknown { cap: usize },
}
