//! Simulation and verification of adaptive and oblivious multi-head
//! finite-state gamblers over self-referential sequence families.

pub mod alphabet;
pub mod engine;
pub mod gamblers;
pub mod model;
pub mod rational;
pub mod recon;
pub mod sequence;
pub mod structure;
