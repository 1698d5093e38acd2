use std::collections::{BTreeMap, HashMap};

use crate::alphabet::{tuple_from_index, tuple_index, Alphabet, Symbol};
use crate::model::bets::BetDistribution;
use crate::model::gambler::{Gambler, MoveMask, StateId, MAX_HEADS};
use crate::model::ModelError;
use crate::rational::Rational;

/// One transition row. `None` entries in the pattern are wildcards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionRule {
    pub pattern: Vec<Option<Symbol>>,
    pub next: usize,
    pub mask: MoveMask,
}

impl TransitionRule {
    pub fn matches(&self, observed: &[Symbol]) -> bool {
        self.pattern
            .iter()
            .zip(observed)
            .all(|(p, &o)| p.is_none_or(|s| s == o))
    }
}

/// Dense lookup is built when `|Q|·|Σ|^h` stays under this many entries.
const DENSE_LIMIT: usize = 1 << 22;
const UNDEFINED: u64 = u64::MAX;

/// An explicitly tabulated gambler. Rows per state are tried in order and the
/// first matching row wins.
#[derive(Debug, Clone)]
pub struct TableSpec {
    heads: usize,
    alphabet: Alphabet,
    state_names: Vec<String>,
    initial: usize,
    capital: Rational,
    bet_rows: Vec<BetDistribution>,
    state_bets: Vec<usize>,
    rules: Vec<Vec<TransitionRule>>,
    metadata: BTreeMap<String, String>,
    dense: Option<Vec<u64>>,
}

/// Unvalidated parts of a table machine.
#[derive(Debug, Clone)]
pub struct TableParts {
    pub heads: usize,
    pub alphabet: Alphabet,
    pub state_names: Vec<String>,
    pub initial: usize,
    pub capital: Rational,
    /// One row per state.
    pub bets: Vec<BetDistribution>,
    /// Rules per state, in priority order.
    pub rules: Vec<Vec<TransitionRule>>,
    pub metadata: BTreeMap<String, String>,
}

impl TableSpec {
    pub fn new(parts: TableParts) -> Result<Self, ModelError> {
        let TableParts {
            heads,
            alphabet,
            state_names,
            initial,
            capital,
            bets,
            rules,
            metadata,
        } = parts;
        if heads == 0 || heads > MAX_HEADS {
            return Err(ModelError::Heads(heads));
        }
        let q = state_names.len();
        if q == 0 {
            return Err(ModelError::Structure("no states".into()));
        }
        if initial >= q {
            return Err(ModelError::Structure("initial state out of range".into()));
        }
        if bets.len() != q || rules.len() != q {
            return Err(ModelError::Structure(format!(
                "{q} states but {} bet rows and {} rule lists",
                bets.len(),
                rules.len()
            )));
        }
        if num_traits::Signed::is_negative(&capital) {
            return Err(ModelError::Structure("negative initial capital".into()));
        }
        for (state, row) in bets.iter().enumerate() {
            if row.len() != alphabet.size() {
                return Err(ModelError::Structure(format!(
                    "bet row of state {} has {} entries, alphabet has {}",
                    state_names[state],
                    row.len(),
                    alphabet.size()
                )));
            }
        }
        for (state, list) in rules.iter().enumerate() {
            for rule in list {
                if rule.pattern.len() != heads {
                    return Err(ModelError::Structure(format!(
                        "rule of state {} has {} symbols, expected {heads}",
                        state_names[state],
                        rule.pattern.len()
                    )));
                }
                if rule.next >= q {
                    return Err(ModelError::Structure("rule target out of range".into()));
                }
                if rule.pattern.iter().flatten().any(|&s| !alphabet.contains(s)) {
                    return Err(ModelError::Structure("pattern symbol outside alphabet".into()));
                }
            }
        }
        let mut dedup: HashMap<BetDistribution, usize> = HashMap::new();
        let mut bet_rows = Vec::new();
        let state_bets = bets
            .into_iter()
            .map(|row| {
                *dedup.entry(row.clone()).or_insert_with(|| {
                    bet_rows.push(row);
                    bet_rows.len() - 1
                })
            })
            .collect();
        let mut spec = Self {
            heads,
            alphabet,
            state_names,
            initial,
            capital,
            bet_rows,
            state_bets,
            rules,
            metadata,
            dense: None,
        };
        spec.compile();
        Ok(spec)
    }

    fn compile(&mut self) {
        let Some(tuples) = self.alphabet.tuple_count(self.heads) else {
            return;
        };
        let Some(total) = tuples.checked_mul(self.state_names.len()) else {
            return;
        };
        if total > DENSE_LIMIT {
            return;
        }
        let mut table = vec![UNDEFINED; total];
        for (state, list) in self.rules.iter().enumerate() {
            for t in 0..tuples {
                let obs = tuple_from_index(&self.alphabet, t, self.heads);
                if let Some(rule) = list.iter().find(|r| r.matches(&obs)) {
                    table[state * tuples + t] = (rule.next as u64) << 32 | rule.mask.0 as u64;
                }
            }
        }
        self.dense = Some(table);
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn initial_index(&self) -> usize {
        self.initial
    }

    pub fn rules(&self, state: usize) -> &[TransitionRule] {
        &self.rules[state]
    }

    pub fn state_bet_index(&self, state: usize) -> usize {
        self.state_bets[state]
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn metadata_mut(&mut self) -> &mut BTreeMap<String, String> {
        &mut self.metadata
    }

    fn lookup(&self, state: usize, observed: &[Symbol]) -> Option<(StateId, MoveMask)> {
        if let Some(table) = &self.dense {
            let tuples = table.len() / self.state_names.len();
            let entry = table[state * tuples + tuple_index(&self.alphabet, observed)];
            if entry == UNDEFINED {
                return None;
            }
            return Some((StateId(entry >> 32), MoveMask(entry as u32)));
        }
        self.rules[state]
            .iter()
            .find(|r| r.matches(observed))
            .map(|r| (StateId(r.next as u64), r.mask))
    }
}

impl Gambler for TableSpec {
    fn heads(&self) -> usize {
        self.heads
    }

    fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    fn initial_state(&self) -> StateId {
        StateId(self.initial as u64)
    }

    fn initial_capital(&self) -> &Rational {
        &self.capital
    }

    fn transition(&self, state: StateId, observed: &[Symbol]) -> Option<(StateId, MoveMask)> {
        self.lookup(state.0 as usize, observed)
    }

    fn bet_rows(&self) -> &[BetDistribution] {
        &self.bet_rows
    }

    fn bet_index(&self, state: StateId) -> usize {
        self.state_bets[state.0 as usize]
    }

    fn state_label(&self, state: StateId) -> String {
        self.state_names[state.0 as usize].clone()
    }
}
