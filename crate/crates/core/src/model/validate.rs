use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::alphabet::tuple_from_index;
use crate::model::gambler::{Gambler, StateId};
use crate::model::ModelError;
use crate::rational::format_rational;

/// Bounds on how much work [`validate_spec`] may do.
#[derive(Debug, Clone, Copy)]
pub struct ValidationLimits {
    pub max_states: usize,
    /// Upper bound on `|Σ|^h`; beyond it totality cannot be checked exhaustively.
    pub max_tuples: usize,
}

impl Default for ValidationLimits {
    fn default() -> Self {
        Self {
            max_states: 1 << 20,
            max_tuples: 1 << 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub heads: usize,
    pub alphabet_size: usize,
    pub reachable_states: usize,
    pub bet_rows: usize,
    pub transitions_checked: u64,
}

/// Breadth-first enumeration of the states reachable from `q0`, in discovery order.
///
/// Fails with `PartialTransition` at the first undefined reachable pair and with
/// `UnreachableTotalityUnknown` once more than `limits.max_states` states are found.
pub fn reachable_states(gambler: &dyn Gambler, limits: ValidationLimits) -> Result<(Vec<StateId>, u64), ModelError> {
    let alphabet = gambler.alphabet();
    let heads = gambler.heads();
    let tuples = alphabet
        .tuple_count(heads)
        .filter(|&t| t <= limits.max_tuples)
        .ok_or(ModelError::UnreachableTotalityUnknown { cap: limits.max_states })?;
    let observations: Vec<_> = (0..tuples).map(|t| tuple_from_index(&alphabet, t, heads)).collect();
    let trailing = heads - 1;

    let start = gambler.initial_state();
    let mut seen = HashSet::from([start]);
    let mut order = vec![start];
    let mut queue = VecDeque::from([start]);
    let mut checked = 0u64;
    while let Some(state) = queue.pop_front() {
        for obs in &observations {
            let Some((next, mask)) = gambler.transition(state, obs) else {
                return Err(ModelError::PartialTransition {
                    state: gambler.state_label(state),
                    observed: obs.clone(),
                });
            };
            checked += 1;
            if !mask.fits(trailing) {
                return Err(ModelError::MaskWidthMismatch {
                    state: gambler.state_label(state),
                    mask: mask.0,
                    expected: trailing,
                });
            }
            if seen.insert(next) {
                if order.len() >= limits.max_states {
                    return Err(ModelError::UnreachableTotalityUnknown { cap: limits.max_states });
                }
                order.push(next);
                queue.push_back(next);
            }
        }
    }
    Ok((order, checked))
}

/// Checks bet rows, mask widths and totality of `δ` over the reachable set.
pub fn validate_spec(gambler: &dyn Gambler, limits: ValidationLimits) -> Result<ValidationReport, ModelError> {
    let size = gambler.alphabet().size();
    for row in gambler.bet_rows() {
        if row.len() != size {
            return Err(ModelError::Structure(format!(
                "bet row has {} entries, alphabet has {size}",
                row.len()
            )));
        }
    }
    let (states, checked) = reachable_states(gambler, limits)?;
    for &state in &states {
        let row = gambler.bet(state);
        if !row.is_stochastic() {
            return Err(ModelError::NonStochasticBets {
                state: gambler.state_label(state),
                sum: format_rational(&row.sum()),
            });
        }
    }
    Ok(ValidationReport {
        heads: gambler.heads(),
        alphabet_size: size,
        reachable_states: states.len(),
        bet_rows: gambler.bet_rows().len(),
        transitions_checked: checked,
    })
}
