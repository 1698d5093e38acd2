//! Oblivious gambler for `F_{h+1}`: `h` trailing heads at speeds `p_k / p_{h+1}`
//! sit on `q·p_1, …, q·p_h` just before every multiple `q·p_{h+1}`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::alphabet::{tuple_from_index, Alphabet};
use crate::gamblers::GamblerError;
use crate::model::{BetDistribution, MoveMask, ObliviousParts, ObliviousSpec, MAX_HEADS};
use crate::rational::{format_rational, ratio, Rational};
use crate::sequence::fparity::FLayout;

/// Data state `p = r·3 + acc` with `acc ∈ {0, 1, none = 2}` and `r` mirroring the timer.
pub fn build_f_parity(h: u32, eps: &Rational) -> Result<ObliviousSpec, GamblerError> {
    if h == 0 || h as usize + 1 > MAX_HEADS {
        return Err(GamblerError::Parameter(format!("h = {h} outside 1..{MAX_HEADS}")));
    }
    if !(*eps > Rational::zero() && *eps < Rational::one()) {
        return Err(GamblerError::Parameter(format!(
            "hedge {} outside (0, 1)",
            format_rational(eps)
        )));
    }
    let h = h as usize;
    let heads = h + 1;
    let layout = FLayout::new(h);
    let m = layout.modulus() as usize;
    let alphabet = Alphabet::binary();
    let tuples = alphabet
        .tuple_count(heads)
        .filter(|&t| t <= 1 << 20)
        .ok_or_else(|| GamblerError::Parameter("observation space too large".into()))?;
    const NONE: usize = 2;
    let data_states = m * 3;

    let mut data_next = Vec::with_capacity(data_states * tuples);
    for p in 0..data_states {
        let r2 = (p / 3 + 1) % m;
        for i in 0..tuples {
            let acc = if r2 == 0 {
                let obs = tuple_from_index(&alphabet, i, heads);
                obs[..h].iter().fold(0usize, |a, &s| a ^ s as usize)
            } else {
                NONE
            };
            data_next.push((r2 * 3 + acc) as u32);
        }
    }
    let timer_masks = (0..m as u64)
        .map(|t| {
            let mut mask = MoveMask::NONE;
            for k in 1..=h {
                if t < layout.prime(k) {
                    mask.set(k - 1);
                }
            }
            mask
        })
        .collect();
    let bets = vec![
        BetDistribution::uniform(&alphabet),
        BetDistribution::confident(&alphabet, 0, eps),
        BetDistribution::confident(&alphabet, 1, eps),
    ];
    let mut bet_of = vec![0; data_states * m];
    for acc in 0..2 {
        // r = 0 rows; only t = 0 co-occurs with them.
        for t in 0..m {
            bet_of[acc * m + t] = 1 + acc;
        }
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("family".into(), "f".into());
    metadata.insert("kind".into(), "oblivious-parity".into());
    metadata.insert("h".into(), h.to_string());
    metadata.insert("eps".into(), format_rational(eps));
    metadata.insert("modulus".into(), m.to_string());
    Ok(ObliviousSpec::new(ObliviousParts {
        heads,
        alphabet,
        data_states,
        data_next,
        timer_next: (0..m as u32).map(|t| (t + 1) % m as u32).collect(),
        timer_masks,
        bets,
        bet_of,
        initial: (NONE, 0),
        capital: ratio(1, 1),
        metadata,
    })?)
}
