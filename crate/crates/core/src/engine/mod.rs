//! Step semantics, capital accounting and run traces.
//!
//! Timing convention: at step `n` the machine is in `q_n`, bets `β(q_n)` on
//! `S[n]`, then reads `(S[π_1(n)], …, S[π_{h-1}(n)], S[n])` to produce `q_{n+1}`
//! and the trailing moves. The leading head sits at `n` during step `n`.

pub mod csv;
pub mod ledger;
pub mod observe;
pub mod schedule;
pub mod stats;

use serde::Serialize;

use crate::alphabet::Symbol;
use crate::model::{Gambler, MoveMask, StateId};
use crate::rational::{format_rational, Rational};
use crate::sequence::{SequenceError, SymbolSource};
use ledger::{CapitalLedger, RowFactors};
pub use observe::{PositionLog, ReadLog, StepObserver, StepView};
pub use schedule::{BoundaryFamily, CheckpointSchedule};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("no transition defined in state {state} at step {n}")]
    UndefinedTransition { n: u64, state: String },
    #[error("checkpoint schedule: {0}")]
    Schedule(String),
    #[error("alphabet of the sequence ({sequence}) differs from the gambler's ({gambler})")]
    AlphabetMismatch { sequence: String, gambler: String },
    #[error("log-domain capital drifted {deviation:e} from exact at step {n}")]
    DriftExceeded { n: u64, deviation: f64 },
    #[error("trace was recorded with hedge {recorded}, asked for {requested}")]
    HedgeMismatch { recorded: String, requested: String },
    #[error("trace does not cover step {0}")]
    TraceTooShort(u64),
}

/// Parameters of one simulation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n_max: u64,
    pub s_values: Vec<f64>,
    /// Sorted checkpoints in `1..=n_max`, e.g. from [`CheckpointSchedule::expand`].
    pub checkpoints: Vec<u64>,
    /// `ε` under which a bet row counts as `χ_a`; `None` disables bet classification.
    pub hedge: Option<Rational>,
    /// Carry an exact rational capital alongside the log-domain value.
    pub exact: bool,
}

/// State of a run after a prefix of length `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Checkpoint {
    pub n: u64,
    /// `log2 d_G(S[0..n-1])`.
    pub log2_capital: f64,
    /// `log2 d^{(s)}` per configured `s`.
    pub log2_s: Vec<f64>,
    /// `π_1(n), …, π_{h-1}(n)`.
    pub positions: Vec<u64>,
    pub state: StateId,
    /// `χ_a` bets whose target `a` was realized.
    pub full_wins: u64,
    pub parity_bets: u64,
    /// `χ_a` bets lost to a block symbol.
    pub parity_losses: u64,
    /// `χ_a` bets lost to `$`.
    pub marker_misses: u64,
    /// Exact capital as `num/den` when the run is in exact mode.
    pub exact_capital: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunTrace {
    pub heads: usize,
    pub alphabet_size: usize,
    pub n_max: u64,
    pub s_values: Vec<f64>,
    pub hedge: Option<String>,
    pub checkpoints: Vec<Checkpoint>,
}

impl RunTrace {
    pub fn at(&self, n: u64) -> Option<&Checkpoint> {
        self.checkpoints
            .binary_search_by_key(&n, |c| c.n)
            .ok()
            .map(|i| &self.checkpoints[i])
    }

    pub fn last(&self) -> Option<&Checkpoint> {
        self.checkpoints.last()
    }
}

/// A stepping simulation of one gambler over one sequence. Cloning snapshots it.
#[derive(Clone)]
pub struct Engine<'g> {
    gambler: &'g dyn Gambler,
    rows: Vec<RowFactors>,
    state: StateId,
    positions: Vec<u64>,
    observed: Vec<Symbol>,
    ledger: CapitalLedger,
    n: u64,
    full_wins: u64,
    parity_bets: u64,
    parity_losses: u64,
    marker_misses: u64,
}

impl<'g> Engine<'g> {
    pub fn new(gambler: &'g dyn Gambler, hedge: Option<&Rational>, exact: bool) -> Self {
        let alphabet = gambler.alphabet();
        Self {
            gambler,
            rows: gambler
                .bet_rows()
                .iter()
                .map(|r| RowFactors::new(r, &alphabet, hedge))
                .collect(),
            state: gambler.initial_state(),
            positions: vec![0; gambler.heads() - 1],
            observed: vec![0; gambler.heads()],
            ledger: CapitalLedger::new(gambler.initial_capital(), exact),
            n: 0,
            full_wins: 0,
            parity_bets: 0,
            parity_losses: 0,
            marker_misses: 0,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn state(&self) -> StateId {
        self.state
    }

    pub fn positions(&self) -> &[u64] {
        &self.positions
    }

    pub fn ledger(&self) -> &CapitalLedger {
        &self.ledger
    }

    /// Executes step `n`; `seq` must hold index `n`.
    pub fn step(&mut self, seq: &dyn SymbolSource, observers: &mut [&mut dyn StepObserver]) -> Result<(), EngineError> {
        let n = self.n;
        let symbol = seq.symbol(n);
        let row_index = self.gambler.bet_index(self.state);
        let row = &self.rows[row_index];
        self.ledger.apply(&row.factors[symbol as usize]);
        if let Some(target) = row.target {
            self.parity_bets += 1;
            if symbol == target {
                self.full_wins += 1;
            } else if seq.alphabet().is_dollar(symbol) {
                self.marker_misses += 1;
            } else {
                self.parity_losses += 1;
            }
        }
        let trailing = self.positions.len();
        for (slot, &at) in self.observed.iter_mut().zip(&self.positions) {
            *slot = seq.symbol(at);
        }
        self.observed[trailing] = symbol;
        let (next, mask) =
            self.gambler
                .transition(self.state, &self.observed)
                .ok_or_else(|| EngineError::UndefinedTransition {
                    n,
                    state: self.gambler.state_label(self.state),
                })?;
        if !observers.is_empty() {
            let view = StepView {
                n,
                state: self.state,
                positions: &self.positions,
                observed: &self.observed,
                bet_row: row_index,
                bet_target: row.target,
                next,
                mask,
            };
            for obs in observers.iter_mut() {
                obs.observe(&view);
            }
        }
        self.apply_moves(mask);
        self.state = next;
        self.n += 1;
        Ok(())
    }

    fn apply_moves(&mut self, mask: MoveMask) {
        for (i, at) in self.positions.iter_mut().enumerate() {
            if mask.moves(i) {
                *at += 1;
            }
        }
    }

    pub fn checkpoint(&self, s_values: &[f64], log2_alphabet: f64) -> Checkpoint {
        let log2_capital = self.ledger.log2();
        Checkpoint {
            n: self.n,
            log2_capital,
            log2_s: s_values
                .iter()
                .map(|&s| (s - 1.0) * self.n as f64 * log2_alphabet + log2_capital)
                .collect(),
            positions: self.positions.clone(),
            state: self.state,
            full_wins: self.full_wins,
            parity_bets: self.parity_bets,
            parity_losses: self.parity_losses,
            marker_misses: self.marker_misses,
            exact_capital: self.ledger.exact().map(|c| format_rational(&c)),
        }
    }
}

/// Runs `gambler` on `seq[0..n_max-1]`, recording the configured checkpoints.
pub fn run(gambler: &dyn Gambler, seq: &mut dyn SymbolSource, config: &RunConfig) -> Result<RunTrace, EngineError> {
    run_observed(gambler, seq, config, &mut [])
}

pub fn run_observed(
    gambler: &dyn Gambler,
    seq: &mut dyn SymbolSource,
    config: &RunConfig,
    observers: &mut [&mut dyn StepObserver],
) -> Result<RunTrace, EngineError> {
    if seq.alphabet() != gambler.alphabet() {
        return Err(EngineError::AlphabetMismatch {
            sequence: seq.alphabet().to_string(),
            gambler: gambler.alphabet().to_string(),
        });
    }
    if config.checkpoints.is_empty() {
        return Err(EngineError::Schedule("empty checkpoint list".into()));
    }
    if config.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EngineError::Schedule("checkpoints must be strictly increasing".into()));
    }
    if let Some(&last) = config.checkpoints.last() {
        if last > config.n_max {
            return Err(EngineError::Schedule(format!(
                "checkpoint {last} beyond n_max {}",
                config.n_max
            )));
        }
    }
    seq.ensure(config.n_max)?;
    let log2_alphabet = (gambler.alphabet().size() as f64).log2();
    let mut engine = Engine::new(gambler, config.hedge.as_ref(), config.exact);
    let mut checkpoints = Vec::with_capacity(config.checkpoints.len());
    let mut next_cp = config.checkpoints.iter().peekable();
    while next_cp.peek() == Some(&&0) {
        checkpoints.push(engine.checkpoint(&config.s_values, log2_alphabet));
        next_cp.next();
    }
    while engine.n() < config.n_max {
        engine.step(&*seq, observers)?;
        if next_cp.peek() == Some(&&engine.n()) {
            checkpoints.push(engine.checkpoint(&config.s_values, log2_alphabet));
            next_cp.next();
        }
    }
    Ok(RunTrace {
        heads: gambler.heads(),
        alphabet_size: gambler.alphabet().size(),
        n_max: config.n_max,
        s_values: config.s_values.clone(),
        hedge: config.hedge.as_ref().map(format_rational),
        checkpoints,
    })
}

/// Tolerance for [`exact_crosscheck`].
pub const DRIFT_TOLERANCE: f64 = 1e-9;

/// Largest `|2^{log2 capital} / exact − 1|` over steps `1..=n`; fails with
/// `DriftExceeded` beyond [`DRIFT_TOLERANCE`].
pub fn exact_crosscheck(gambler: &dyn Gambler, seq: &mut dyn SymbolSource, n: u64) -> Result<f64, EngineError> {
    seq.ensure(n)?;
    let mut engine = Engine::new(gambler, None, true);
    let mut worst = 0.0f64;
    while engine.n() < n {
        engine.step(&*seq, &mut [])?;
        let approx = engine.ledger().log2();
        let exact = engine.ledger().exact_log2().expect("exact mode");
        let deviation = if approx == f64::NEG_INFINITY && exact == f64::NEG_INFINITY {
            0.0
        } else {
            ((approx - exact).exp2() - 1.0).abs()
        };
        if deviation.is_nan() || deviation > DRIFT_TOLERANCE {
            return Err(EngineError::DriftExceeded {
                n: engine.n(),
                deviation,
            });
        }
        worst = worst.max(deviation);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::alphabet::Alphabet;
    use crate::model::{BetDistribution, TableParts, TableSpec, TransitionRule};
    use crate::rational::ratio;
    use crate::sequence::SymbolSequence;

    fn one_state(bet: BetDistribution) -> TableSpec {
        TableSpec::new(TableParts {
            heads: 1,
            alphabet: Alphabet::binary(),
            state_names: vec!["q".into()],
            initial: 0,
            capital: ratio(1, 1),
            bets: vec![bet],
            rules: vec![vec![TransitionRule {
                pattern: vec![None],
                next: 0,
                mask: MoveMask::NONE,
            }]],
            metadata: BTreeMap::new(),
        })
        .unwrap()
    }

    fn config(n: u64) -> RunConfig {
        RunConfig {
            n_max: n,
            s_values: vec![1.0, 0.5],
            checkpoints: (1..=n).collect(),
            hedge: None,
            exact: true,
        }
    }

    #[test]
    fn uniform_bettor_keeps_capital() {
        let spec = one_state(BetDistribution::uniform(&Alphabet::binary()));
        let mut seq = SymbolSequence::raw(1, crate::sequence::BitSource::seeded(1)).unwrap();
        let trace = run(&spec, &mut seq, &config(64)).unwrap();
        for cp in &trace.checkpoints {
            assert_eq!(cp.log2_capital, 0.0);
            assert_eq!(cp.exact_capital.as_deref(), Some("1/1"));
            assert_eq!(cp.log2_s[0], cp.log2_capital);
        }
    }

    #[test]
    fn all_in_on_zeros_doubles() {
        let spec = one_state(BetDistribution::point(&Alphabet::binary(), 0));
        let mut seq = SymbolSequence::from_symbols(Alphabet::binary(), &[0; 40]).unwrap();
        let trace = run(&spec, &mut seq, &config(40)).unwrap();
        for cp in &trace.checkpoints {
            assert_eq!(cp.log2_capital, cp.n as f64);
            assert_eq!(cp.log2_s[1], cp.n as f64 * 0.5);
        }
    }

    #[test]
    fn rejects_bad_schedules() {
        let spec = one_state(BetDistribution::uniform(&Alphabet::binary()));
        let mut seq = SymbolSequence::from_symbols(Alphabet::binary(), &[0; 10]).unwrap();
        let mut cfg = config(10);
        cfg.checkpoints = vec![];
        assert!(matches!(run(&spec, &mut seq, &cfg), Err(EngineError::Schedule(_))));
        cfg.checkpoints = vec![3, 3];
        assert!(matches!(run(&spec, &mut seq, &cfg), Err(EngineError::Schedule(_))));
        cfg.checkpoints = vec![11];
        assert!(matches!(run(&spec, &mut seq, &cfg), Err(EngineError::Schedule(_))));
    }
}
