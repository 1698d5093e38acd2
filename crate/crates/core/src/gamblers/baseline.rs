//! Oblivious comparison gambler for `Φ_h`: fixed head speeds, so it can follow
//! the references of only one interval parity.

use std::collections::BTreeMap;

use crate::alphabet::{tuple_from_index, Alphabet};
use crate::gamblers::phi_tracker::PhiTrackerParams;
use crate::gamblers::GamblerError;
use crate::model::{BetDistribution, MoveMask, ObliviousParts, ObliviousSpec};
use crate::rational::{format_rational, ratio};

/// Which intervals the baseline follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineParity {
    /// Last trailing head at speed `h/(h+1)`; bets in even-`k` intervals.
    Even,
    /// Last trailing head at speed `(h-1)/(h+1)`; bets in odd-`k` intervals.
    Odd,
}

impl BaselineParity {
    fn speed_numerator(self, h: usize) -> usize {
        match self {
            Self::Even => h,
            Self::Odd => h - 1,
        }
    }

    fn betting_mode(self) -> usize {
        match self {
            Self::Even => 1,
            Self::Odd => 3,
        }
    }
}

impl std::str::FromStr for BaselineParity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "even" => Ok(Self::Even),
            "odd" => Ok(Self::Odd),
            _ => Err(format!("expected even or odd, got {s}")),
        }
    }
}

/// Builds the baseline. Data state `p = (mode·(h+1) + r)·(2^L+2) + acc` where
/// `mode ∈ 0..5` is the tracker mode shifted by one, `r` mirrors the timer and
/// `acc` is as in the tracker.
pub fn build_baseline(params: &PhiTrackerParams, parity: BaselineParity) -> Result<ObliviousSpec, GamblerError> {
    let alphabet: Alphabet = params.validate()?;
    let h = params.h as usize;
    let m = h + 1;
    let blocks = alphabet.block_count();
    let accs = blocks + 2;
    let (marker, none) = (blocks, blocks + 1);
    let data_states = 5 * m * accs;
    let encode = |mode: usize, r: usize, acc: usize| (mode * m + r) * accs + acc;
    let tuples = alphabet
        .tuple_count(h)
        .filter(|&t| t <= 1 << 20)
        .ok_or_else(|| GamblerError::Parameter("observation space too large".into()))?;
    let last = h - 2;

    let mut data_next = Vec::with_capacity(data_states * tuples);
    for p in 0..data_states {
        let (mode, r) = (p / accs / m, p / accs % m);
        for i in 0..tuples {
            let obs = tuple_from_index(&alphabet, i, h);
            let r2 = (r + 1) % m;
            let acc = if r2 != 0 {
                none
            } else if alphabet.is_dollar(obs[last]) {
                marker
            } else if obs[..last].iter().any(|&s| alphabet.is_dollar(s)) {
                none
            } else {
                obs[..=last].iter().fold(0usize, |a, &s| a ^ s as usize)
            };
            let mode2 = if alphabet.is_dollar(obs[h - 1]) {
                if mode == 0 {
                    1
                } else {
                    mode % 4 + 1
                }
            } else {
                mode
            };
            data_next.push(encode(mode2, r2, acc) as u32);
        }
    }

    let c = parity.speed_numerator(h);
    let timer_masks = (0..m)
        .map(|t| {
            let mut mask = MoveMask::NONE;
            for j in 0..last {
                if t < j + 1 {
                    mask.set(j);
                }
            }
            if t < c {
                mask.set(last);
            }
            mask
        })
        .collect();

    let mut bets = vec![BetDistribution::hedged(&alphabet, &params.eps)];
    bets.extend(
        alphabet
            .symbols()
            .map(|a| BetDistribution::confident(&alphabet, a, &params.eps)),
    );
    let mut bet_of = vec![0; data_states * m];
    for p in 0..data_states {
        let (mode, r, acc) = (p / accs / m, p / accs % m, p % accs);
        if mode == parity.betting_mode() && r == 0 && acc != none {
            // The timer mirrors r, so only t = r can co-occur; every t gets the same row.
            for t in 0..m {
                bet_of[p * m + t] = 1 + acc;
            }
        }
    }

    let mut metadata = BTreeMap::new();
    metadata.insert("family".into(), "phi".into());
    metadata.insert("kind".into(), "oblivious-baseline".into());
    metadata.insert("h".into(), h.to_string());
    metadata.insert("L".into(), params.block_bits.to_string());
    metadata.insert("eps".into(), format_rational(&params.eps));
    metadata.insert("parity".into(), format!("{parity:?}").to_lowercase());
    metadata.insert("speed".into(), format_rational(&ratio(c as i64, m as i64)));
    Ok(ObliviousSpec::new(ObliviousParts {
        heads: h,
        alphabet,
        data_states,
        data_next,
        timer_next: (0..m as u32).map(|t| (t + 1) % m as u32).collect(),
        timer_masks,
        bets,
        bet_of,
        initial: (encode(0, 0, none), 0),
        capital: ratio(1, 1),
        metadata,
    })?)
}
