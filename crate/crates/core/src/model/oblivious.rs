use std::collections::BTreeMap;

use crate::alphabet::{tuple_from_index, tuple_index, Alphabet, Symbol};
use crate::engine::ledger::{CapitalLedger, RowFactors};
use crate::model::bets::BetDistribution;
use crate::model::gambler::{MoveMask, MAX_HEADS};
use crate::model::table::{TableParts, TableSpec, TransitionRule};
use crate::model::ModelError;
use crate::rational::{ratio, Rational};
use crate::sequence::{SequenceError, SymbolSource};

/// Unvalidated parts of an oblivious machine over `Q = P × T`.
///
/// Tables are dense: `data_next[p * |Σ|^h + tuple]`, `timer_next[t]`,
/// `timer_masks[t]` and `bet_of[p * |T| + t]`.
#[derive(Debug, Clone)]
pub struct ObliviousParts {
    pub heads: usize,
    pub alphabet: Alphabet,
    pub data_states: usize,
    pub data_next: Vec<u32>,
    pub timer_next: Vec<u32>,
    pub timer_masks: Vec<MoveMask>,
    pub bets: Vec<BetDistribution>,
    pub bet_of: Vec<usize>,
    pub initial: (usize, usize),
    pub capital: Rational,
    pub metadata: BTreeMap<String, String>,
}

/// An oblivious gambler: head movement is a function of the timer component only.
#[derive(Debug, Clone)]
pub struct ObliviousSpec {
    parts: ObliviousParts,
    tuples: usize,
}

impl ObliviousSpec {
    pub fn new(parts: ObliviousParts) -> Result<Self, ModelError> {
        let h = parts.heads;
        if h == 0 || h > MAX_HEADS {
            return Err(ModelError::Heads(h));
        }
        let tuples = parts
            .alphabet
            .tuple_count(h)
            .filter(|&t| t <= 1 << 20)
            .ok_or_else(|| ModelError::Structure("observation space too large for a dense table".into()))?;
        let p = parts.data_states;
        let t = parts.timer_next.len();
        if p == 0 || t == 0 {
            return Err(ModelError::Structure("empty data or timer component".into()));
        }
        if parts.data_next.len() != p * tuples || parts.data_next.iter().any(|&x| x as usize >= p) {
            return Err(ModelError::Structure("data transition table malformed".into()));
        }
        if parts.timer_next.iter().any(|&x| x as usize >= t) || parts.timer_masks.len() != t {
            return Err(ModelError::Structure("timer table malformed".into()));
        }
        if let Some(mask) = parts.timer_masks.iter().find(|m| !m.fits(h - 1)) {
            return Err(ModelError::MaskWidthMismatch {
                state: "timer".into(),
                mask: mask.0,
                expected: h - 1,
            });
        }
        if parts.bet_of.len() != p * t || parts.bet_of.iter().any(|&b| b >= parts.bets.len()) {
            return Err(ModelError::Structure("bet assignment malformed".into()));
        }
        if let Some(row) = parts.bets.iter().find(|r| !r.is_stochastic()) {
            return Err(ModelError::NonStochasticBets {
                state: "oblivious row".into(),
                sum: crate::rational::format_rational(&row.sum()),
            });
        }
        if parts.initial.0 >= p || parts.initial.1 >= t {
            return Err(ModelError::Structure("initial state out of range".into()));
        }
        Ok(Self { parts, tuples })
    }

    pub fn heads(&self) -> usize {
        self.parts.heads
    }

    pub fn alphabet(&self) -> Alphabet {
        self.parts.alphabet
    }

    pub fn data_states(&self) -> usize {
        self.parts.data_states
    }

    pub fn timer_states(&self) -> usize {
        self.parts.timer_next.len()
    }

    pub fn initial(&self) -> (usize, usize) {
        self.parts.initial
    }

    pub fn capital(&self) -> &Rational {
        &self.parts.capital
    }

    pub fn bets(&self) -> &[BetDistribution] {
        &self.parts.bets
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.parts.metadata
    }

    pub fn data_step(&self, p: usize, observed: &[Symbol]) -> usize {
        self.parts.data_next[p * self.tuples + tuple_index(&self.parts.alphabet, observed)] as usize
    }

    pub fn timer_step(&self, t: usize) -> usize {
        self.parts.timer_next[t] as usize
    }

    pub fn timer_mask(&self, t: usize) -> MoveMask {
        self.parts.timer_masks[t]
    }

    pub fn bet_index(&self, p: usize, t: usize) -> usize {
        self.parts.bet_of[p * self.timer_states() + t]
    }

    /// State index of `(p, t)` in the embedded machine.
    pub fn pair_index(&self, p: usize, t: usize) -> usize {
        p * self.timer_states() + t
    }
}

/// The eventual cycle of `δ_T` from the initial timer state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimerCycle {
    pub preperiod: usize,
    pub states: Vec<usize>,
}

impl TimerCycle {
    pub fn of(spec: &ObliviousSpec) -> Self {
        let mut first_seen = vec![usize::MAX; spec.timer_states()];
        let mut walk = Vec::new();
        let mut t = spec.initial().1;
        while first_seen[t] == usize::MAX {
            first_seen[t] = walk.len();
            walk.push(t);
            t = spec.timer_step(t);
        }
        let preperiod = first_seen[t];
        Self {
            preperiod,
            states: walk.split_off(preperiod),
        }
    }
}

/// `η_i`: fraction of the timer cycle on which trailing head `i` moves.
pub fn oblivious_speeds(spec: &ObliviousSpec) -> Vec<Rational> {
    let cycle = TimerCycle::of(spec);
    let len = cycle.states.len() as i64;
    (0..spec.heads() - 1)
        .map(|i| {
            let ones = cycle.states.iter().filter(|&&t| spec.timer_mask(t).moves(i)).count() as i64;
            ratio(ones, len)
        })
        .collect()
}

/// The adaptive machine on `Q = P × T` with `δ((p,t), b) = ((δ_P(p,b), δ_T(t)), μ(t))`.
/// State `(p, t)` becomes index `p·|T| + t`.
pub fn embed_oblivious(spec: &ObliviousSpec) -> TableSpec {
    let alphabet = spec.alphabet();
    let h = spec.heads();
    let (np, nt) = (spec.data_states(), spec.timer_states());
    let observations: Vec<Vec<Symbol>> = (0..spec.tuples).map(|i| tuple_from_index(&alphabet, i, h)).collect();
    let mut names = Vec::with_capacity(np * nt);
    let mut bets = Vec::with_capacity(np * nt);
    let mut rules = Vec::with_capacity(np * nt);
    for p in 0..np {
        for t in 0..nt {
            names.push(format!("p{p}.t{t}"));
            bets.push(spec.bets()[spec.bet_index(p, t)].clone());
            let t2 = spec.timer_step(t);
            let mask = spec.timer_mask(t);
            rules.push(
                observations
                    .iter()
                    .map(|obs| TransitionRule {
                        pattern: obs.iter().map(|&s| Some(s)).collect(),
                        next: spec.pair_index(spec.data_step(p, obs), t2),
                        mask,
                    })
                    .collect(),
            );
        }
    }
    let mut metadata = spec.metadata().clone();
    metadata.insert("embedded".into(), format!("oblivious P={np} T={nt}"));
    TableSpec::new(TableParts {
        heads: h,
        alphabet,
        state_names: names,
        initial: spec.pair_index(spec.initial().0, spec.initial().1),
        capital: spec.capital().clone(),
        bets,
        rules,
        metadata,
    })
    .expect("embedding of a validated oblivious spec is well formed")
}

/// Per-step record of a direct oblivious simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectRun {
    pub trailing: usize,
    /// `π_i(n)` for `n = 0..=steps`, flattened row-major.
    pub positions: Vec<u64>,
    /// `(p_n, t_n)` for `n = 0..=steps`.
    pub states: Vec<(usize, usize)>,
    /// `log2 d_G(S[0..n-1])` for `n = 0..=steps`.
    pub log2_capital: Vec<f64>,
}

impl DirectRun {
    pub fn position(&self, n: usize, head: usize) -> u64 {
        self.positions[n * self.trailing + head]
    }
}

/// Simulates the oblivious machine on its own factored state, without the embedding.
pub fn direct_run(
    spec: &ObliviousSpec,
    source: &mut dyn SymbolSource,
    steps: usize,
) -> Result<DirectRun, SequenceError> {
    source.ensure(steps as u64 + 1)?;
    let h = spec.heads();
    let trailing = h - 1;
    let rows: Vec<RowFactors> = spec
        .bets()
        .iter()
        .map(|r| RowFactors::new(r, &spec.alphabet(), None))
        .collect();
    let mut ledger = CapitalLedger::new(spec.capital(), false);
    let mut pos = vec![0u64; trailing];
    let (mut p, mut t) = spec.initial();
    let mut out = DirectRun {
        trailing,
        positions: Vec::with_capacity((steps + 1) * trailing),
        states: Vec::with_capacity(steps + 1),
        log2_capital: Vec::with_capacity(steps + 1),
    };
    let mut obs = vec![0 as Symbol; h];
    for n in 0..=steps {
        out.positions.extend_from_slice(&pos);
        out.states.push((p, t));
        out.log2_capital.push(ledger.log2());
        if n == steps {
            break;
        }
        let lead = source.symbol(n as u64);
        ledger.apply(&rows[spec.bet_index(p, t)].factors[lead as usize]);
        for (slot, &at) in obs.iter_mut().zip(&pos) {
            *slot = source.symbol(at);
        }
        obs[trailing] = lead;
        let mask = spec.timer_mask(t);
        p = spec.data_step(p, &obs);
        t = spec.timer_step(t);
        for (i, at) in pos.iter_mut().enumerate() {
            if mask.moves(i) {
                *at += 1;
            }
        }
    }
    Ok(out)
}
