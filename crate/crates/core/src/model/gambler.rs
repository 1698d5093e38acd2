use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Symbol};
use crate::model::bets::BetDistribution;
use crate::rational::Rational;

/// Largest number of heads a machine may declare (masks are 32-bit).
pub const MAX_HEADS: usize = 32;

/// Opaque state token. Table machines use dense indices, procedural machines
/// pack their fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StateId(pub u64);

/// Trailing-head moves for one step: bit `i-1` set means head `i` moves right.
/// The leading head always moves and has no bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct MoveMask(pub u32);

impl MoveMask {
    pub const NONE: MoveMask = MoveMask(0);

    pub fn all(trailing: usize) -> Self {
        if trailing == 0 {
            MoveMask(0)
        } else {
            MoveMask(u32::MAX >> (32 - trailing))
        }
    }

    /// Mask from per-head flags (index 0 is head 1).
    pub fn from_flags(flags: &[bool]) -> Self {
        MoveMask(
            flags
                .iter()
                .enumerate()
                .fold(0u32, |m, (i, &f)| if f { m | (1 << i) } else { m }),
        )
    }

    /// Zero-based trailing head index.
    pub fn moves(&self, head: usize) -> bool {
        self.0 >> head & 1 == 1
    }

    pub fn set(&mut self, head: usize) {
        self.0 |= 1 << head;
    }

    /// True when no bit at or above `trailing` is set.
    pub fn fits(&self, trailing: usize) -> bool {
        trailing >= 32 || self.0 >> trailing == 0
    }

    /// `0`/`1` string, head 1 first; `-` for machines without trailing heads.
    pub fn spell(&self, trailing: usize) -> String {
        if trailing == 0 {
            return "-".to_string();
        }
        (0..trailing).map(|i| if self.moves(i) { '1' } else { '0' }).collect()
    }
}

/// An adaptive multi-head finite-state gambler `(Q, Σ, δ, β, q0, c0)`.
///
/// Heads `1..h-1` are trailing heads, head `h` leads. `transition` receives the
/// `h` symbols under the heads (trailing heads first, leading head last).
pub trait Gambler: Send + Sync {
    fn heads(&self) -> usize;

    fn alphabet(&self) -> Alphabet;

    fn initial_state(&self) -> StateId;

    fn initial_capital(&self) -> &Rational;

    /// `δ(q, (b_1, …, b_h))`, or `None` where the machine is undefined.
    fn transition(&self, state: StateId, observed: &[Symbol]) -> Option<(StateId, MoveMask)>;

    /// Distinct betting rows used by the machine.
    fn bet_rows(&self) -> &[BetDistribution];

    /// Index into [`Gambler::bet_rows`] of `β(q)`.
    fn bet_index(&self, state: StateId) -> usize;

    fn bet(&self, state: StateId) -> &BetDistribution {
        &self.bet_rows()[self.bet_index(state)]
    }

    fn state_label(&self, state: StateId) -> String {
        format!("q{}", state.0)
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masks() {
        let m = MoveMask::from_flags(&[true, false, true]);
        assert!(m.moves(0));
        assert!(!m.moves(1));
        assert!(m.moves(2));
        assert_eq!(m.spell(3), "101");
        assert!(m.fits(3));
        assert!(!m.fits(2));
        assert_eq!(MoveMask::all(3), MoveMask(0b111));
        assert_eq!(MoveMask::all(0).spell(0), "-");
    }
}
