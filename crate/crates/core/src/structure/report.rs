use std::collections::BTreeMap;

use serde::Serialize;

use crate::structure::IndexSet;

/// A relation between two named sets of a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "relation", rename_all = "lowercase")]
pub enum Claim {
    Disjoint { a: String, b: String },
    Subset { a: String, b: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    #[serde(flatten)]
    pub claim: Claim,
    pub holds: bool,
}

/// Named sets plus verdicts that are always recomputed from the stored sets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IndexSetReport {
    pub params: BTreeMap<String, String>,
    pub sets: BTreeMap<String, IndexSet>,
    pub verdicts: Vec<Verdict>,
}

impl IndexSetReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    pub fn set(&mut self, name: &str, set: IndexSet) -> &mut Self {
        self.sets.insert(name.into(), set);
        self
    }

    /// Records `claim`, evaluated against the sets currently stored.
    ///
    /// Panics when the claim names a set the report does not hold.
    pub fn claim(&mut self, claim: Claim) -> bool {
        let holds = self.evaluate(&claim);
        self.verdicts.push(Verdict { claim, holds });
        holds
    }

    fn evaluate(&self, claim: &Claim) -> bool {
        let get = |name: &String| {
            self.sets
                .get(name)
                .unwrap_or_else(|| panic!("claim names unknown set {name}"))
        };
        match claim {
            Claim::Disjoint { a, b } => get(a).is_disjoint(get(b)),
            Claim::Subset { a, b } => get(a).is_subset(get(b)),
        }
    }

    /// Re-evaluates every verdict; `false` if any stored verdict disagrees.
    pub fn consistent(&self) -> bool {
        self.verdicts.iter().all(|v| self.evaluate(&v.claim) == v.holds)
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }
}
