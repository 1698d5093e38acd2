use std::collections::VecDeque;

use crate::alphabet::{Alphabet, Symbol};
use crate::recon::DependencyGraph;
use crate::structure::IndexSet;

/// One parity equation: `value[members[0]] = XOR value[members[1..]]`.
struct Equation {
    members: Vec<u64>,
    unknown: usize,
}

/// Fixed point of the parity equations up to `horizon`, starting from `initial`
/// (indexed `0..=horizon`). Structural symbols are filled in first.
///
/// A parity index becomes known once all its parents are; with `xor_inversion`
/// a parent also becomes known once the parity index and all its siblings are.
/// Equations touching a `$` are ignored.
pub fn deduce(
    graph: &DependencyGraph,
    alphabet: &Alphabet,
    initial: &[Option<Symbol>],
    xor_inversion: bool,
) -> Vec<Option<Symbol>> {
    let horizon = initial.len() as u64 - 1;
    let mut values: Vec<Option<Symbol>> = initial.to_vec();
    for i in 0..=horizon {
        if values[i as usize].is_none() {
            values[i as usize] = graph.structural_symbol(alphabet, i);
        }
    }
    let mut equations = Vec::new();
    let mut touching: Vec<Vec<u32>> = vec![Vec::new(); values.len()];
    for l in 0..=horizon {
        let parents = graph.parents(l);
        if parents.is_empty() {
            continue;
        }
        let mut members = Vec::with_capacity(parents.len() + 1);
        members.push(l);
        members.extend(parents);
        let id = equations.len() as u32;
        for &x in &members {
            touching[x as usize].push(id);
        }
        let unknown = members.iter().filter(|&&x| values[x as usize].is_none()).count();
        equations.push(Equation { members, unknown });
    }

    let mut queue: VecDeque<u32> = (0..equations.len() as u32)
        .filter(|&e| equations[e as usize].unknown == 1)
        .collect();
    while let Some(e) = queue.pop_front() {
        let eq = &equations[e as usize];
        if eq.unknown != 1 {
            continue;
        }
        let (pos, &target) = eq
            .members
            .iter()
            .enumerate()
            .find(|(_, &x)| values[x as usize].is_none())
            .expect("one unknown member");
        if pos > 0 && !xor_inversion {
            continue;
        }
        let mut acc: Symbol = 0;
        let mut valid = true;
        for &x in &eq.members {
            if x == target {
                continue;
            }
            let v = values[x as usize].expect("known member");
            if alphabet.is_dollar(v) {
                valid = false;
                break;
            }
            acc ^= v;
        }
        if !valid {
            continue;
        }
        values[target as usize] = Some(acc);
        for &other in &touching[target as usize] {
            let eq = &mut equations[other as usize];
            eq.unknown -= 1;
            if eq.unknown == 1 {
                queue.push_back(other);
            }
        }
    }
    values
}

/// Indices deducible from `known` up to `horizon` (values are irrelevant here).
pub fn deducible_closure(
    graph: &DependencyGraph,
    alphabet: &Alphabet,
    known: &IndexSet,
    horizon: u64,
    xor_inversion: bool,
) -> IndexSet {
    let mut initial = vec![None; horizon as usize + 1];
    for i in known.clip(0, horizon).iter() {
        initial[i as usize] = Some(0);
    }
    let values = deduce(graph, alphabet, &initial, xor_inversion);
    IndexSet::from_points(
        values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_some())
            .map(|(i, _)| i as u64),
    )
}
