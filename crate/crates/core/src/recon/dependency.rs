use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Symbol};
use crate::sequence::fparity::FLayout;
use crate::sequence::phi::{classify_phi, PhiIndex};
use crate::sequence::phi_parents;

/// Which self-referential family an index belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum DepFamily {
    Phi { h: u64 },
    F { h: usize },
}

/// Parent lookup for one family, with the prime table built once.
#[derive(Debug, Clone)]
pub struct DependencyGraph {
    family: DepFamily,
    layout: Option<FLayout>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DependencyNode {
    pub index: u64,
    #[serde(flatten)]
    pub family: DepFamily,
    pub parents: Vec<u64>,
}

impl DependencyGraph {
    pub fn new(family: DepFamily) -> Self {
        let layout = match family {
            DepFamily::F { h } => Some(FLayout::new(h)),
            DepFamily::Phi { h } => {
                assert!(h >= 2, "Φ needs h ≥ 2");
                None
            }
        };
        Self { family, layout }
    }

    pub fn family(&self) -> DepFamily {
        self.family
    }

    /// Referenced indices, all strictly smaller than `index`; empty for free symbols.
    pub fn parents(&self, index: u64) -> Vec<u64> {
        match (&self.family, &self.layout) {
            (DepFamily::Phi { h }, _) => phi_parents(*h, index),
            (DepFamily::F { .. }, Some(layout)) => layout.parents(index),
            _ => unreachable!("layout exists for F"),
        }
    }

    pub fn node(&self, index: u64) -> DependencyNode {
        DependencyNode {
            index,
            family: self.family,
            parents: self.parents(index),
        }
    }

    /// Symbol fixed by the construction alone: `$` markers of `Φ`, `F[0] = 0`.
    pub fn structural_symbol(&self, alphabet: &Alphabet, index: u64) -> Option<Symbol> {
        match self.family {
            DepFamily::Phi { h } => matches!(classify_phi(h, index), PhiIndex::Marker { .. })
                .then(|| alphabet.dollar())
                .flatten(),
            DepFamily::F { .. } => (index == 0).then_some(0),
        }
    }
}

/// Leaves of odd multiplicity after expanding `root` through `depth` levels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeafExpansion {
    pub root: u64,
    pub depth: u32,
    pub leaves: Vec<u64>,
}

/// Expands level by level; nodes without parents carry over unchanged and
/// repeated nodes cancel in pairs, so the XOR of the leaves equals the root.
pub fn leaf_expansion(graph: &DependencyGraph, root: u64, depth: u32) -> LeafExpansion {
    let mut frontier: BTreeSet<u64> = BTreeSet::from([root]);
    for _ in 0..depth {
        let mut next = BTreeSet::new();
        let mut changed = false;
        for &x in &frontier {
            let parents = graph.parents(x);
            if parents.is_empty() {
                toggle(&mut next, x);
            } else {
                changed = true;
                for p in parents {
                    toggle(&mut next, p);
                }
            }
        }
        frontier = next;
        if !changed {
            break;
        }
    }
    LeafExpansion {
        root,
        depth,
        leaves: frontier.into_iter().collect(),
    }
}

fn toggle(set: &mut BTreeSet<u64>, x: u64) {
    if !set.remove(&x) {
        set.insert(x);
    }
}
