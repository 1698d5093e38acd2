//! Records where the heads were when each `Φ_h` parity bet was prepared and
//! checks those positions and the bet targets against the references.

use serde::Serialize;

use crate::alphabet::Symbol;
use crate::engine::{StepObserver, StepView};
use crate::sequence::phi::{PhiCursor, PhiIndex};
use crate::sequence::{phi_references, SymbolSource};

/// One parity index `n`: the trailing positions on step `n-1` and the bet made on `S[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrackingRecord {
    pub n: u64,
    pub k: u32,
    pub positions: Vec<u64>,
    pub bet_target: Option<Symbol>,
}

/// Step observer producing [`TrackingRecord`]s for a `Φ_h` run.
#[derive(Debug, Clone)]
pub struct TrackingLog {
    cursor: PhiCursor,
    previous: Option<Vec<u64>>,
    records: Vec<TrackingRecord>,
}

impl TrackingLog {
    pub fn new(h: u64) -> Self {
        Self {
            cursor: PhiCursor::new(h),
            previous: None,
            records: Vec::new(),
        }
    }

    pub fn records(&self) -> &[TrackingRecord] {
        &self.records
    }
}

impl StepObserver for TrackingLog {
    fn observe(&mut self, step: &StepView<'_>) {
        if let (PhiIndex::Parity { k }, Some(prev)) = (self.cursor.classify(step.n), &self.previous) {
            self.records.push(TrackingRecord {
                n: step.n,
                k,
                positions: prev.clone(),
                bet_target: step.bet_target,
            });
        }
        match &mut self.previous {
            Some(prev) => prev.copy_from_slice(step.positions),
            None => self.previous = Some(step.positions.to_vec()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// Head `h-1` was not at `(h - k mod 2)·n/(h+1)`.
    LastHead,
    /// Some head `i ≤ h-2` was not at `i·n/(h+1)`.
    InnerHead,
    /// The bet target is not the XOR of the referenced symbols.
    Target,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrackingViolation {
    pub n: u64,
    pub k: u32,
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrackingReport {
    pub checked: u64,
    pub violations: Vec<TrackingViolation>,
}

impl TrackingReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every record with `k ≥ warmup_k`; all violations are reported.
pub fn verify_tracking(log: &TrackingLog, seq: &dyn SymbolSource, h: u64, warmup_k: u32) -> TrackingReport {
    let alphabet = seq.alphabet();
    let mut report = TrackingReport {
        checked: 0,
        violations: Vec::new(),
    };
    for rec in log.records.iter().filter(|r| r.k >= warmup_k) {
        report.checked += 1;
        let refs = phi_references(h, rec.k, rec.n);
        let mut flag = |kind, detail: String| {
            report.violations.push(TrackingViolation {
                n: rec.n,
                k: rec.k,
                kind,
                detail,
            })
        };
        let last = refs.len() - 1;
        if rec.positions[last] != refs[last] {
            flag(
                ViolationKind::LastHead,
                format!("head {} at {}, reference {}", last + 1, rec.positions[last], refs[last]),
            );
        }
        for (i, (&at, &want)) in rec.positions.iter().zip(&refs).take(last).enumerate() {
            if at != want {
                flag(
                    ViolationKind::InnerHead,
                    format!("head {} at {at}, reference {want}", i + 1),
                );
            }
        }
        let symbols: Vec<Symbol> = refs
            .iter()
            .filter(|&&r| r < seq.len())
            .map(|&r| seq.symbol(r))
            .collect();
        let expected = if symbols.len() < refs.len() || symbols.iter().any(|&s| alphabet.is_dollar(s)) {
            None
        } else {
            Some(symbols.iter().fold(0, |a, &s| a ^ s))
        };
        if expected.is_none() || rec.bet_target != expected {
            flag(
                ViolationKind::Target,
                format!("bet on {:?}, references give {:?}", rec.bet_target, expected),
            );
        }
    }
    report
}
