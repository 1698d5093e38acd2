//! Text format for gambler specifications.
//!
//! ```text
//! # comment
//! gambler v1
//! alphabet 1 dollar        # block width L, optional `dollar`
//! heads 2
//! initial q0
//! capital 1/1
//! meta key free text
//! state q0
//!   bet 63/128 63/128 1/64 # one rational per symbol, symbol order
//!   on 0 $ -> q1 1         # h symbols or `*`, target state, h-1 mask bits
//!   on * * -> q0 0         # (`-` as the mask when h = 1)
//! ```
//!
//! Symbols are spelled as L-bit blocks or `$`. Rules of a state are tried top
//! to bottom and the first match wins. Rationals are always `num/den` or integers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::alphabet::{tuple_from_index, Alphabet, Symbol};
use crate::model::bets::BetDistribution;
use crate::model::gambler::{Gambler, MoveMask, StateId};
use crate::model::table::{TableParts, TableSpec, TransitionRule};
use crate::model::validate::{reachable_states, ValidationLimits};
use crate::model::ModelError;
use crate::rational::{format_rational, parse_rational, ratio, Rational};

const MAGIC: &str = "gambler v1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn syntax(line: usize, message: impl Into<String>) -> SpecFileError {
    SpecFileError::Syntax {
        line,
        message: message.into(),
    }
}

struct PendingState {
    name: String,
    bet: Option<BetDistribution>,
    rules: Vec<(usize, Vec<Option<Symbol>>, String, MoveMask)>,
}

pub fn parse_spec(text: &str) -> Result<TableSpec, SpecFileError> {
    let mut alphabet: Option<Alphabet> = None;
    let mut heads: Option<usize> = None;
    let mut initial: Option<(usize, String)> = None;
    let mut capital: Option<Rational> = None;
    let mut metadata = BTreeMap::new();
    let mut states: Vec<PendingState> = Vec::new();
    let mut seen_magic = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if !seen_magic {
            if line != MAGIC {
                return Err(syntax(line_no, format!("expected `{MAGIC}` header")));
            }
            seen_magic = true;
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "alphabet" => {
                let mut parts = rest.split_whitespace();
                let bits: u32 = parts
                    .next()
                    .and_then(|b| b.parse().ok())
                    .ok_or_else(|| syntax(line_no, "alphabet needs a block width"))?;
                let dollar = match parts.next() {
                    None => false,
                    Some("dollar") => true,
                    Some(other) => return Err(syntax(line_no, format!("unexpected `{other}`"))),
                };
                alphabet = Some(Alphabet::new(bits, dollar).map_err(|e| syntax(line_no, e.to_string()))?);
            }
            "heads" => {
                heads = Some(rest.parse().map_err(|_| syntax(line_no, "heads needs an integer"))?);
            }
            "initial" => initial = Some((line_no, rest.to_string())),
            "capital" => {
                capital = Some(parse_rational(rest).map_err(|e| syntax(line_no, e.to_string()))?);
            }
            "meta" => {
                let (key, value) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                if key.is_empty() {
                    return Err(syntax(line_no, "meta needs a key"));
                }
                metadata.insert(key.to_string(), value.trim().to_string());
            }
            "state" => {
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(syntax(line_no, "state needs a single-token name"));
                }
                if states.iter().any(|s| s.name == rest) {
                    return Err(syntax(line_no, format!("state `{rest}` declared twice")));
                }
                states.push(PendingState {
                    name: rest.to_string(),
                    bet: None,
                    rules: Vec::new(),
                });
            }
            "bet" => {
                let state = states
                    .last_mut()
                    .ok_or_else(|| syntax(line_no, "bet before any state"))?;
                if state.bet.is_some() {
                    return Err(syntax(line_no, "second bet row for one state"));
                }
                let row = rest
                    .split_whitespace()
                    .map(parse_rational)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| syntax(line_no, e.to_string()))?;
                state.bet = Some(BetDistribution::new(row));
            }
            "on" => {
                let alphabet = alphabet.ok_or_else(|| syntax(line_no, "rule before alphabet"))?;
                let h = heads.ok_or_else(|| syntax(line_no, "rule before heads"))?;
                let state = states
                    .last_mut()
                    .ok_or_else(|| syntax(line_no, "rule before any state"))?;
                let (lhs, rhs) = rest
                    .split_once("->")
                    .ok_or_else(|| syntax(line_no, "rule needs `->`"))?;
                let pattern = lhs
                    .split_whitespace()
                    .map(|tok| match tok {
                        "*" => Ok(None),
                        _ => alphabet
                            .parse_symbol(tok)
                            .map(Some)
                            .ok_or_else(|| syntax(line_no, format!("unknown symbol `{tok}`"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if pattern.len() != h {
                    return Err(syntax(
                        line_no,
                        format!("pattern has {} symbols, expected {h}", pattern.len()),
                    ));
                }
                let mut target = rhs.split_whitespace();
                let next = target
                    .next()
                    .ok_or_else(|| syntax(line_no, "rule needs a target state"))?;
                let bits = target.next().ok_or_else(|| syntax(line_no, "rule needs a mask"))?;
                if target.next().is_some() {
                    return Err(syntax(line_no, "trailing tokens after mask"));
                }
                let mask = parse_mask(bits, h - 1).map_err(|found| {
                    SpecFileError::Model(ModelError::MaskWidthMismatch {
                        state: state.name.clone(),
                        mask: found,
                        expected: h - 1,
                    })
                })?;
                state.rules.push((line_no, pattern, next.to_string(), mask));
            }
            other => return Err(syntax(line_no, format!("unknown keyword `{other}`"))),
        }
    }

    let end = text.lines().count();
    if !seen_magic {
        return Err(syntax(end, format!("missing `{MAGIC}` header")));
    }
    let alphabet = alphabet.ok_or_else(|| syntax(end, "missing alphabet"))?;
    let heads = heads.ok_or_else(|| syntax(end, "missing heads"))?;
    let capital = capital.unwrap_or_else(|| ratio(1, 1));
    let index: HashMap<&str, usize> = states.iter().enumerate().map(|(i, s)| (s.name.as_str(), i)).collect();
    let (init_line, init_name) = initial.ok_or_else(|| syntax(end, "missing initial state"))?;
    let initial = *index
        .get(init_name.as_str())
        .ok_or_else(|| syntax(init_line, format!("unknown state `{init_name}`")))?;

    let mut bets = Vec::with_capacity(states.len());
    let mut rules = Vec::with_capacity(states.len());
    for state in &states {
        bets.push(
            state
                .bet
                .clone()
                .ok_or_else(|| syntax(end, format!("state `{}` has no bet row", state.name)))?,
        );
        let mut list = Vec::with_capacity(state.rules.len());
        for (line_no, pattern, next, mask) in &state.rules {
            let next = *index
                .get(next.as_str())
                .ok_or_else(|| syntax(*line_no, format!("unknown state `{next}`")))?;
            list.push(TransitionRule {
                pattern: pattern.clone(),
                next,
                mask: *mask,
            });
        }
        rules.push(list);
    }
    Ok(TableSpec::new(TableParts {
        heads,
        alphabet,
        state_names: states.into_iter().map(|s| s.name).collect(),
        initial,
        capital,
        bets,
        rules,
        metadata,
    })?)
}

/// Parses `0101` (head 1 first) or `-`. On a width mismatch returns the bits read.
fn parse_mask(text: &str, trailing: usize) -> Result<MoveMask, u32> {
    if text == "-" {
        return if trailing == 0 { Ok(MoveMask::NONE) } else { Err(0) };
    }
    let mut mask = MoveMask::NONE;
    for (i, c) in text.chars().enumerate() {
        match c {
            '1' if i < 32 => mask.set(i),
            '0' | '1' => {}
            _ => return Err(mask.0),
        }
    }
    if text.chars().count() != trailing {
        return Err(mask.0);
    }
    Ok(mask)
}

/// Serializes the reachable part of any machine. State labels are kept when they
/// are unique single tokens, otherwise states are renamed `q<i>` in discovery order.
pub fn write_spec(
    gambler: &dyn Gambler,
    metadata: &BTreeMap<String, String>,
    limits: ValidationLimits,
) -> Result<String, ModelError> {
    let alphabet = gambler.alphabet();
    let h = gambler.heads();
    let (states, _) = reachable_states(gambler, limits)?;
    let position: HashMap<StateId, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let labels: Vec<String> = states.iter().map(|&s| gambler.state_label(s)).collect();
    let usable = labels.iter().all(|l| is_token(l)) && labels.iter().collect::<BTreeSet<_>>().len() == labels.len();
    let names: Vec<String> = if usable {
        labels
    } else {
        (0..states.len()).map(|i| format!("q{i}")).collect()
    };
    let tuples = alphabet.tuple_count(h).expect("bounded by reachable_states");
    let observations: Vec<Vec<Symbol>> = (0..tuples).map(|t| tuple_from_index(&alphabet, t, h)).collect();

    let mut out = String::new();
    writeln!(out, "{MAGIC}").unwrap();
    let dollar = if alphabet.has_dollar() { " dollar" } else { "" };
    writeln!(out, "alphabet {}{dollar}", alphabet.block_bits()).unwrap();
    writeln!(out, "heads {h}").unwrap();
    writeln!(out, "initial {}", names[0]).unwrap();
    writeln!(out, "capital {}", format_rational(gambler.initial_capital())).unwrap();
    for (key, value) in metadata {
        let value = value.replace(['\n', '\r', '#'], " ");
        writeln!(out, "meta {key} {value}").unwrap();
    }
    for (i, &state) in states.iter().enumerate() {
        writeln!(out, "state {}", names[i]).unwrap();
        writeln!(out, "  bet {}", gambler.bet(state).spell()).unwrap();
        let outcomes: Vec<(usize, MoveMask)> = observations
            .iter()
            .map(|obs| {
                let (next, mask) = gambler.transition(state, obs).expect("checked total");
                (position[&next], mask)
            })
            .collect();
        for (pattern, (next, mask)) in compress(&alphabet, h, &outcomes) {
            let symbols: Vec<String> = pattern
                .iter()
                .map(|s| s.map_or_else(|| "*".to_string(), |s| alphabet.spell(s)))
                .collect();
            writeln!(
                out,
                "  on {} -> {} {}",
                symbols.join(" "),
                names[next],
                mask.spell(h - 1)
            )
            .unwrap();
        }
    }
    Ok(out)
}

fn is_token(label: &str) -> bool {
    !label.is_empty() && label != "->" && !label.contains(|c: char| c.is_whitespace() || c == '#')
}

type Pattern = Vec<Option<Symbol>>;

/// Covers a total outcome table with wildcard rules: specific rules for every
/// outcome but the most frequent one, then a catch-all. Specific rules never
/// overlap, so their order is irrelevant.
fn compress(alphabet: &Alphabet, h: usize, outcomes: &[(usize, MoveMask)]) -> Vec<(Pattern, (usize, MoveMask))> {
    let mut groups: BTreeMap<(usize, u32), BTreeSet<Pattern>> = BTreeMap::new();
    for (t, &(next, mask)) in outcomes.iter().enumerate() {
        let pattern = tuple_from_index(alphabet, t, h).into_iter().map(Some).collect();
        groups.entry((next, mask.0)).or_default().insert(pattern);
    }
    let default = *groups
        .iter()
        .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(a.0)))
        .map(|(k, _)| k)
        .expect("at least one observation");
    let mut rules = Vec::new();
    for (key, patterns) in groups {
        if key == default {
            continue;
        }
        for pattern in merge_wildcards(alphabet, h, patterns) {
            rules.push((pattern, (key.0, MoveMask(key.1))));
        }
    }
    rules.push((vec![None; h], (default.0, MoveMask(default.1))));
    rules
}

fn merge_wildcards(alphabet: &Alphabet, h: usize, mut patterns: BTreeSet<Pattern>) -> BTreeSet<Pattern> {
    let size = alphabet.size();
    loop {
        let mut changed = false;
        for j in 0..h {
            let mut buckets: BTreeMap<Pattern, usize> = BTreeMap::new();
            for p in patterns.iter().filter(|p| p[j].is_some()) {
                let mut key = p.clone();
                key[j] = None;
                *buckets.entry(key).or_default() += 1;
            }
            for (key, count) in buckets {
                if count == size {
                    for s in alphabet.symbols() {
                        let mut p = key.clone();
                        p[j] = Some(s);
                        patterns.remove(&p);
                    }
                    patterns.insert(key);
                    changed = true;
                }
            }
        }
        if !changed {
            return patterns;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Gambler;

    const SAMPLE: &str = "\
gambler v1
# a two-head toy
alphabet 1
heads 2
initial a
capital 2
meta note hello world
state a
  bet 1/2 1/2
  on * 1 -> b 1
  on * * -> a 0
state b
  bet 3/4 1/4
  on * * -> a 1
";

    #[test]
    fn parses_sample() {
        let spec = parse_spec(SAMPLE).unwrap();
        assert_eq!(spec.heads(), 2);
        assert_eq!(spec.state_count(), 2);
        assert_eq!(spec.initial_capital(), &ratio(2, 1));
        assert_eq!(spec.metadata()["note"], "hello world");
        assert_eq!(spec.transition(StateId(0), &[0, 1]), Some((StateId(1), MoveMask(1))));
    }

    #[test]
    fn round_trip_preserves_behavior() {
        let spec = parse_spec(SAMPLE).unwrap();
        let text = write_spec(&spec, spec.metadata(), ValidationLimits::default()).unwrap();
        let again = parse_spec(&text).unwrap();
        for q in 0..2 {
            for t in 0..4 {
                let obs = tuple_from_index(&Alphabet::binary(), t, 2);
                assert_eq!(spec.transition(StateId(q), &obs), again.transition(StateId(q), &obs));
            }
            assert_eq!(spec.bet(StateId(q)), again.bet(StateId(q)));
        }
    }

    #[test]
    fn mask_width_checked() {
        let bad = SAMPLE.replace("-> a 0", "-> a 00");
        assert!(matches!(
            parse_spec(&bad),
            Err(SpecFileError::Model(ModelError::MaskWidthMismatch { expected: 1, .. }))
        ));
    }

    #[test]
    fn syntax_errors_name_the_line() {
        let bad = SAMPLE.replace("capital 2", "capital 0.5");
        assert!(matches!(parse_spec(&bad), Err(SpecFileError::Syntax { line: 6, .. })));
        let bad = SAMPLE.replace("-> b 1", "-> c 1");
        assert!(matches!(parse_spec(&bad), Err(SpecFileError::Syntax { line: 10, .. })));
    }

    #[test]
    fn wildcard_merging() {
        let a = Alphabet::with_dollar(1).unwrap();
        let all: BTreeSet<Pattern> = (0..3).map(|s| vec![Some(s), Some(1)]).collect();
        let merged = merge_wildcards(&a, 2, all);
        assert_eq!(merged.into_iter().collect::<Vec<_>>(), vec![vec![None, Some(1)]]);
    }
}
