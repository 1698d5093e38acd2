use crate::alphabet::Symbol;
use crate::model::{MoveMask, StateId};

/// Everything the engine knows about step `n`, before the moves are applied.
#[derive(Debug, Clone, Copy)]
pub struct StepView<'a> {
    pub n: u64,
    /// `q_n`.
    pub state: StateId,
    /// `π_1(n), …, π_{h-1}(n)`.
    pub positions: &'a [u64],
    /// Symbols under the heads, leading head last.
    pub observed: &'a [Symbol],
    pub bet_row: usize,
    pub bet_target: Option<Symbol>,
    /// `q_{n+1}`.
    pub next: StateId,
    pub mask: MoveMask,
}

pub trait StepObserver {
    fn observe(&mut self, step: &StepView<'_>);
}

/// Trailing-head positions at every executed step.
#[derive(Debug, Clone, Default)]
pub struct PositionLog {
    trailing: usize,
    flat: Vec<u64>,
}

impl PositionLog {
    pub fn new(trailing: usize) -> Self {
        Self {
            trailing,
            flat: Vec::new(),
        }
    }

    /// Steps recorded so far.
    pub fn len(&self) -> u64 {
        self.flat.len().checked_div(self.trailing).unwrap_or(0) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn trailing(&self) -> usize {
        self.trailing
    }

    /// `π_1(n), …, π_{h-1}(n)`, if step `n` was recorded.
    pub fn at(&self, n: u64) -> Option<&[u64]> {
        let start = (n as usize).checked_mul(self.trailing)?;
        self.flat.get(start..start + self.trailing)
    }
}

impl StepObserver for PositionLog {
    fn observe(&mut self, step: &StepView<'_>) {
        debug_assert_eq!(step.n, self.len());
        self.flat.extend_from_slice(step.positions);
    }
}

/// Every index read by any head during the observed steps.
#[derive(Debug, Clone, Default)]
pub struct ReadLog {
    reads: Vec<u64>,
}

impl ReadLog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sorted distinct indices.
    pub fn indices(&self) -> Vec<u64> {
        let mut v = self.reads.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl StepObserver for ReadLog {
    fn observe(&mut self, step: &StepView<'_>) {
        self.reads.extend_from_slice(step.positions);
        self.reads.push(step.n);
    }
}
