//! End-to-end reconstruction round trips: hide part of a `Φ_h` prefix, rebuild
//! it from what remains, and diff the result against the generator.

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Symbol};
use crate::recon::{deduce, DepFamily, DependencyGraph, ReconError};
use crate::sequence::{phi_markers_upto, BitSource, SymbolSequence, SymbolSource};
use crate::structure::{overwritten_set_a, phi_epoch, phi_ref_set, residue_class, IndexSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    /// Recover the prefix from a window that omits one reference slot.
    SlotWindow,
    /// Recover the base sequence from the prefix, the residue class and the rest.
    ResidueSplit,
}

impl std::str::FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "slot-window" => Ok(Self::SlotWindow),
            "residue-split" => Ok(Self::ResidueSplit),
            other => Err(format!("unknown scenario {other:?} (slot-window, residue-split)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub h: u32,
    pub block_bits: u32,
    pub seed: u64,
    pub n: u64,
    /// Defaults to `⌈9n/10⌉`.
    pub m: Option<u64>,
    /// Reference slot for [`ScenarioKind::SlotWindow`]; defaults to the slot that
    /// alternates with the epoch parity, `h - k mod 2`.
    pub j: Option<u64>,
    /// One extra index to withhold from the input, to check that the diff catches it.
    pub erase_extra: Option<u64>,
}

impl ScenarioConfig {
    pub fn new(kind: ScenarioKind, h: u32, block_bits: u32, seed: u64, n: u64) -> Self {
        Self {
            kind,
            h,
            block_bits,
            seed,
            n,
            m: None,
            j: None,
            erase_extra: None,
        }
    }

    pub fn effective_m(&self) -> u64 {
        self.m.unwrap_or_else(|| (9 * self.n).div_ceil(10))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub index: u64,
    pub expected: String,
    /// `None` when the index could not be recovered at all.
    pub found: Option<String>,
}

/// Mismatches beyond this many are counted but not listed.
pub const MISMATCH_LIST_CAP: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub name: String,
    pub checked: u64,
    pub mismatch_count: u64,
    pub mismatches: Vec<Mismatch>,
}

impl Stage {
    fn compare(
        name: &str,
        alphabet: &Alphabet,
        range: &IndexSet,
        expected: &[Symbol],
        found: &[Option<Symbol>],
    ) -> Self {
        let mut stage = Stage {
            name: name.into(),
            checked: 0,
            mismatch_count: 0,
            mismatches: Vec::new(),
        };
        for i in range.iter() {
            stage.checked += 1;
            let want = expected[i as usize];
            let got = found[i as usize];
            if got != Some(want) {
                stage.mismatch_count += 1;
                if stage.mismatches.len() < MISMATCH_LIST_CAP {
                    stage.mismatches.push(Mismatch {
                        index: i,
                        expected: alphabet.spell(want),
                        found: got.map(|s| alphabet.spell(s)),
                    });
                }
            }
        }
        stage
    }

    pub fn ok(&self) -> bool {
        self.mismatch_count == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReconstructionReport {
    pub config: ScenarioConfig,
    pub m: u64,
    pub k: Option<u32>,
    pub j: Option<u64>,
    /// Size of the withheld set (`V` or the hidden residue class).
    pub hidden: u64,
    /// `A ∩ V = ∅`; only meaningful for the slot window.
    pub hidden_avoids_overwritten: bool,
    pub stages: Vec<Stage>,
}

impl ReconstructionReport {
    pub fn exact(&self) -> bool {
        self.stages.iter().all(Stage::ok)
    }

    /// Every index named by a mismatch, across stages.
    pub fn mismatched_indices(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .stages
            .iter()
            .flat_map(|s| s.mismatches.iter().map(|m| m.index))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

pub fn reconstruction_roundtrip(cfg: &ScenarioConfig) -> Result<ReconstructionReport, ReconError> {
    let (h, n, m) = (cfg.h as u64, cfg.n, cfg.effective_m());
    if cfg.h < 2 {
        return Err(ReconError::Parameter(format!("need h ≥ 2, got {}", cfg.h)));
    }
    if m == 0 || m > n {
        return Err(ReconError::Parameter(format!("need 1 ≤ m ≤ n, got m={m} n={n}")));
    }
    let mut raw = SymbolSequence::raw(cfg.block_bits, BitSource::seeded(cfg.seed))?;
    let mut phi = SymbolSequence::phi(cfg.h, cfg.block_bits, BitSource::seeded(cfg.seed))?;
    let r = raw.prefix(n + 1)?;
    let x = phi.prefix(n + 1)?;
    let alphabet = phi.alphabet();
    let graph = DependencyGraph::new(DepFamily::Phi { h });
    let a = overwritten_set_a(h, n);
    let all = IndexSet::interval(0, n);
    let erased = cfg.erase_extra.map(|e| IndexSet::from_points([e])).unwrap_or_default();
    let reveal = |known: &IndexSet, source: &[Symbol]| -> Vec<Option<Symbol>> {
        let mut v = vec![None; n as usize + 1];
        for i in known.difference(&erased).clip(0, n).iter() {
            v[i as usize] = Some(source[i as usize]);
        }
        v
    };

    match cfg.kind {
        ScenarioKind::SlotWindow => {
            let k =
                phi_epoch(h, n).ok_or_else(|| ReconError::Parameter(format!("n={n} precedes the first interval")))?;
            let j = cfg.j.unwrap_or(h - (k as u64 % 2));
            if j == 0 || j > h {
                return Err(ReconError::Parameter(format!("slot j={j} outside 1..={h}")));
            }
            let sets = phi_ref_set(h, m, n, k, j).map_err(|e| ReconError::Parameter(e.to_string()))?;
            let known = sets.w.union(&IndexSet::interval(m, n));
            let y = deduce(&graph, &alphabet, &reveal(&known, &x), true);
            let prefix_stage = Stage::compare("window -> prefix", &alphabet, &all, &x, &y);
            let rebuilt: Vec<Option<Symbol>> = (0..=n)
                .map(|i| {
                    if a.contains(i) {
                        Some(r[i as usize])
                    } else {
                        y[i as usize]
                    }
                })
                .collect();
            let base_stage = Stage::compare("prefix + overwritten -> base", &alphabet, &all, &r, &rebuilt);
            Ok(ReconstructionReport {
                config: cfg.clone(),
                m,
                k: Some(k),
                j: Some(j),
                hidden: sets.v.len(),
                hidden_avoids_overwritten: a.is_disjoint(&sets.v),
                stages: vec![prefix_stage, base_stage],
            })
        }
        ScenarioKind::ResidueSplit => {
            let head = IndexSet::interval(0, m);
            let tail = IndexSet::interval(m, n);
            // `$` positions sit in neither class; they are regenerated structurally.
            let markers = IndexSet::from_points(phi_markers_upto(h, n));
            let hidden = residue_class(h, m, n).difference(&markers);
            let rest = tail.difference(&hidden).difference(&markers);
            // The prefix of Φ is a function of the prefix of S.
            let w = reveal(&head.difference(&a), &r);
            let regenerated = deduce(&graph, &alphabet, &w[..=m as usize], false);
            let prefix_stage = Stage::compare("base prefix -> prefix", &alphabet, &head, &x, &regenerated);
            // Off the overwritten set the two sequences agree.
            let z: Vec<Option<Symbol>> = {
                let mut z = vec![None; n as usize + 1];
                for i in rest.iter() {
                    z[i as usize] = Some(x[i as usize]);
                }
                z
            };
            let rest_stage = Stage::compare("tail -> base off residue class", &alphabet, &rest, &r, &z);
            let y = reveal(&hidden, &r);
            let w_full = reveal(&head, &r);
            let rebuilt: Vec<Option<Symbol>> = (0..=n as usize).map(|i| w_full[i].or(y[i]).or(z[i])).collect();
            let covered = all.difference(&markers.intersection(&tail).difference(&head));
            let base_stage = Stage::compare("(rest, prefix, residue) -> base", &alphabet, &covered, &r, &rebuilt);
            Ok(ReconstructionReport {
                config: cfg.clone(),
                m,
                k: phi_epoch(h, n),
                j: None,
                hidden: hidden.len(),
                hidden_avoids_overwritten: true,
                stages: vec![prefix_stage, rest_stage, base_stage],
            })
        }
    }
}
