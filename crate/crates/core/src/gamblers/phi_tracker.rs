//! The five-mode adaptive gambler for `Φ_h`.
//!
//! State fields: mode (`-1` start, `0`/`2` betting, `1`/`3` repositioning), the
//! leading residue `r = n mod (h+1)`, a pace counter for the counter modes, and
//! an accumulator holding the XOR of the trailing observations taken on the
//! step before each multiple of `h+1` (or `$`, or nothing).

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::alphabet::{Alphabet, Symbol};
use crate::gamblers::schedule::{check_schedule, oracle_horizon, ModeSchedule};
use crate::gamblers::GamblerError;
use crate::model::{BetDistribution, Gambler, MoveMask, StateId, MAX_HEADS};
use crate::rational::{format_rational, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiTrackerParams {
    pub h: u32,
    pub block_bits: u32,
    pub eps: Rational,
}

impl PhiTrackerParams {
    pub fn new(h: u32, block_bits: u32, eps: Rational) -> Self {
        Self { h, block_bits, eps }
    }

    /// `ε = 1/64`.
    pub fn default_hedge() -> Rational {
        ratio(1, 64)
    }

    pub fn validate(&self) -> Result<Alphabet, GamblerError> {
        if self.h < 2 || self.h as usize > MAX_HEADS {
            return Err(GamblerError::Parameter(format!(
                "h = {} outside 2..={MAX_HEADS}",
                self.h
            )));
        }
        if !(self.eps > Rational::zero() && self.eps < Rational::one()) {
            return Err(GamblerError::Parameter(format!(
                "hedge {} outside (0, 1)",
                format_rational(&self.eps)
            )));
        }
        Alphabet::with_dollar(self.block_bits).map_err(|e| GamblerError::Parameter(e.to_string()))
    }
}

const MODE_BITS: u32 = 3;
const R_SHIFT: u32 = MODE_BITS;
const R_BITS: u32 = 8;
const ACC_SHIFT: u32 = R_SHIFT + R_BITS;
const ACC_BITS: u32 = 8;
const CNT_SHIFT: u32 = ACC_SHIFT + ACC_BITS;

/// Unpacked tracker state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TrackerState {
    pub mode: i8,
    pub r: u64,
    pub cnt: u64,
    /// `0..2^L` a block, `2^L` the marker, `2^L + 1` nothing.
    pub acc: u64,
}

impl TrackerState {
    pub fn pack(&self) -> StateId {
        StateId((self.mode + 1) as u64 | self.r << R_SHIFT | self.acc << ACC_SHIFT | self.cnt << CNT_SHIFT)
    }

    pub fn unpack(id: StateId) -> Self {
        let field = |shift: u32, bits: u32| id.0 >> shift & ((1 << bits) - 1);
        Self {
            mode: field(0, MODE_BITS) as i8 - 1,
            r: field(R_SHIFT, R_BITS),
            acc: field(ACC_SHIFT, ACC_BITS),
            cnt: id.0 >> CNT_SHIFT,
        }
    }
}

/// The procedural Φ-tracker. Bet rows: `0` is `ν`, `1 + a` is `χ_a` for `a ∈ Γ`.
#[derive(Debug, Clone)]
pub struct PhiTracker {
    h: u64,
    alphabet: Alphabet,
    eps: Rational,
    schedule: ModeSchedule,
    capital: Rational,
    rows: Vec<BetDistribution>,
    metadata: BTreeMap<String, String>,
}

impl PhiTracker {
    /// Builds with an explicit schedule and no tracking check.
    pub fn with_schedule(params: &PhiTrackerParams, schedule: ModeSchedule) -> Result<Self, GamblerError> {
        let alphabet = params.validate()?;
        let h = params.h as u64;
        for mode in -1..=3 {
            let pace = schedule.pace(mode);
            if pace.period == 0 || pace.moves > pace.period {
                return Err(GamblerError::Parameter(format!(
                    "mode {mode} pace {pace} is not a fraction of steps"
                )));
            }
        }
        if schedule.bet0.period != h + 1 || schedule.bet2.period != h + 1 {
            return Err(GamblerError::Parameter("betting paces must have period h+1".into()));
        }
        if h + 1 >= 1 << R_BITS {
            return Err(GamblerError::Parameter("h too large for the state encoding".into()));
        }
        let mut rows = vec![BetDistribution::hedged(&alphabet, &params.eps)];
        rows.extend(
            alphabet
                .symbols()
                .map(|a| BetDistribution::confident(&alphabet, a, &params.eps)),
        );
        let mut metadata = BTreeMap::new();
        metadata.insert("family".into(), "phi".into());
        metadata.insert("h".into(), h.to_string());
        metadata.insert("L".into(), params.block_bits.to_string());
        metadata.insert("eps".into(), format_rational(&params.eps));
        metadata.insert("schedule.used".into(), schedule.describe());
        metadata.insert(
            "schedule.provenance".into(),
            serde_json::to_value(schedule.provenance)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default(),
        );
        Ok(Self {
            h,
            alphabet,
            eps: params.eps.clone(),
            schedule,
            capital: Rational::one(),
            rows,
            metadata,
        })
    }

    pub fn schedule(&self) -> &ModeSchedule {
        &self.schedule
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn hedge(&self) -> &Rational {
        &self.eps
    }

    fn none(&self) -> u64 {
        self.alphabet.block_count() as u64 + 1
    }

    fn marker(&self) -> u64 {
        self.alphabet.block_count() as u64
    }
}

/// Builds the tracker, preferring the literal schedule and falling back to the
/// derived one; the first schedule that passes the tracking oracle is used.
pub fn build_phi_tracker(params: &PhiTrackerParams) -> Result<PhiTracker, GamblerError> {
    params.validate()?;
    let h = params.h as u64;
    let horizon = oracle_horizon(h);
    let literal = ModeSchedule::literal(h);
    let derived = ModeSchedule::derived(h);
    let literal_check = check_schedule(h, &literal, horizon);
    let (chosen, note) = match &literal_check {
        Ok(()) => (literal, "literal schedule passes the tracking oracle".to_string()),
        Err(fail) => {
            if let Err(second) = check_schedule(h, &derived, horizon) {
                return Err(GamblerError::ScheduleInfeasible {
                    literal: literal.describe(),
                    derived: derived.describe(),
                    detail: format!(
                        "literal fails at n={} (k={}), derived fails at n={} (k={})",
                        fail.n, fail.k, second.n, second.k
                    ),
                });
            }
            (
                derived,
                format!(
                    "literal schedule fails at n={} (k={}): head at {} instead of {}",
                    fail.n, fail.k, fail.scheduled, fail.required
                ),
            )
        }
    };
    let mut tracker = PhiTracker::with_schedule(params, chosen)?;
    tracker.metadata.insert("schedule.literal".into(), literal.describe());
    tracker.metadata.insert("schedule.derived".into(), derived.describe());
    tracker.metadata.insert("schedule.oracle".into(), note);
    tracker
        .metadata
        .insert("schedule.oracle_kmax".into(), horizon.to_string());
    Ok(tracker)
}

impl Gambler for PhiTracker {
    fn heads(&self) -> usize {
        self.h as usize
    }

    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn initial_state(&self) -> StateId {
        TrackerState {
            mode: -1,
            r: 0,
            cnt: 0,
            acc: self.none(),
        }
        .pack()
    }

    fn initial_capital(&self) -> &Rational {
        &self.capital
    }

    fn transition(&self, state: StateId, observed: &[Symbol]) -> Option<(StateId, MoveMask)> {
        let st = TrackerState::unpack(state);
        let h = self.h as usize;
        let last = h - 2;
        let mut mask = MoveMask::NONE;
        for i in 0..last {
            if st.r < (i + 1) as u64 {
                mask.set(i);
            }
        }
        let pace = self.schedule.pace(st.mode);
        let moves = match st.mode {
            0 | 2 => st.r < pace.moves,
            _ => st.cnt < pace.moves,
        };
        if moves {
            mask.set(last);
        }

        let r = (st.r + 1) % (self.h + 1);
        let acc = if r != 0 {
            self.none()
        } else if self.alphabet.is_dollar(observed[last]) {
            self.marker()
        } else if observed[..last].iter().any(|&s| self.alphabet.is_dollar(s)) {
            self.none()
        } else {
            observed[..=last].iter().fold(0u64, |a, &s| a ^ s as u64)
        };
        let lead_is_marker = self.alphabet.is_dollar(observed[h - 1]);
        let (mode, cnt) = if lead_is_marker {
            (if st.mode == -1 { 0 } else { (st.mode + 1) % 4 }, 0)
        } else {
            match st.mode {
                0 | 2 => (st.mode, 0),
                _ => (st.mode, (st.cnt + 1) % pace.period),
            }
        };
        Some((TrackerState { mode, r, cnt, acc }.pack(), mask))
    }

    fn bet_rows(&self) -> &[BetDistribution] {
        &self.rows
    }

    fn bet_index(&self, state: StateId) -> usize {
        let st = TrackerState::unpack(state);
        if matches!(st.mode, 0 | 2) && st.r == 0 && st.acc != self.none() {
            1 + st.acc as usize
        } else {
            0
        }
    }

    fn state_label(&self, state: StateId) -> String {
        let st = TrackerState::unpack(state);
        let acc = if st.acc == self.none() {
            "none".to_string()
        } else {
            self.alphabet.spell(st.acc as Symbol)
        };
        format!("m{}.r{}.c{}.a{}", st.mode, st.r, st.cnt, acc)
    }
}
