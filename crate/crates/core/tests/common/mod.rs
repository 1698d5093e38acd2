//! Random machine generators shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use mhgale::alphabet::{tuple_from_index, Alphabet};
use mhgale::model::{BetDistribution, MoveMask, ObliviousParts, ObliviousSpec, TableParts, TableSpec, TransitionRule};
use mhgale::rational::ratio;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A stochastic row with small integer weights; `allow_zero` permits zero entries.
pub fn random_row(rng: &mut ChaCha8Rng, alphabet: &Alphabet, allow_zero: bool) -> BetDistribution {
    let lo = if allow_zero { 0 } else { 1 };
    let mut weights: Vec<i64> = (0..alphabet.size()).map(|_| rng.gen_range(lo..=5)).collect();
    if weights.iter().all(|&w| w == 0) {
        weights[0] = 1;
    }
    let total: i64 = weights.iter().sum();
    BetDistribution::new(weights.into_iter().map(|w| ratio(w, total)).collect())
}

pub fn random_mask(rng: &mut ChaCha8Rng, trailing: usize) -> MoveMask {
    MoveMask::from_flags(&(0..trailing).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>())
}

/// A fully specified adaptive table machine with random transitions, masks and bets.
pub fn random_table(
    rng: &mut ChaCha8Rng,
    heads: usize,
    states: usize,
    alphabet: Alphabet,
    allow_zero: bool,
) -> TableSpec {
    let tuples = alphabet.tuple_count(heads).expect("small alphabet");
    let rules = (0..states)
        .map(|_| {
            (0..tuples)
                .map(|t| TransitionRule {
                    pattern: tuple_from_index(&alphabet, t, heads).into_iter().map(Some).collect(),
                    next: rng.gen_range(0..states),
                    mask: random_mask(rng, heads - 1),
                })
                .collect()
        })
        .collect();
    TableSpec::new(TableParts {
        heads,
        alphabet,
        state_names: (0..states).map(|i| format!("s{i}")).collect(),
        initial: 0,
        capital: ratio(1, 1),
        bets: (0..states).map(|_| random_row(rng, &alphabet, allow_zero)).collect(),
        rules,
        metadata: BTreeMap::new(),
    })
    .expect("generated table is well formed")
}

/// A random oblivious machine; the timer map is an arbitrary function, so
/// preperiods and cycles of any shape occur.
pub fn random_oblivious(
    rng: &mut ChaCha8Rng,
    heads: usize,
    data_states: usize,
    timer_states: usize,
    alphabet: Alphabet,
) -> ObliviousSpec {
    let tuples = alphabet.tuple_count(heads).expect("small alphabet");
    let rows = 3;
    ObliviousSpec::new(ObliviousParts {
        heads,
        alphabet,
        data_states,
        data_next: (0..data_states * tuples)
            .map(|_| rng.gen_range(0..data_states as u32))
            .collect(),
        timer_next: (0..timer_states)
            .map(|_| rng.gen_range(0..timer_states as u32))
            .collect(),
        timer_masks: (0..timer_states).map(|_| random_mask(rng, heads - 1)).collect(),
        bets: (0..rows).map(|_| random_row(rng, &alphabet, false)).collect(),
        bet_of: (0..data_states * timer_states)
            .map(|_| rng.gen_range(0..rows))
            .collect(),
        initial: (0, rng.gen_range(0..timer_states)),
        capital: ratio(1, 1),
        metadata: BTreeMap::new(),
    })
    .expect("generated oblivious spec is well formed")
}
