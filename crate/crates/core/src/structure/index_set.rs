use std::fmt;

use serde::{Serialize, Serializer};

/// A finite set of naturals stored as sorted, disjoint, non-adjacent closed intervals.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct IndexSet {
    runs: Vec<(u64, u64)>,
}

impl IndexSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// `[a, b]`; empty when `a > b`.
    pub fn interval(a: u64, b: u64) -> Self {
        if a > b {
            Self::new()
        } else {
            Self { runs: vec![(a, b)] }
        }
    }

    pub fn from_intervals(runs: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut v: Vec<(u64, u64)> = runs.into_iter().filter(|(a, b)| a <= b).collect();
        v.sort_unstable();
        let mut out: Vec<(u64, u64)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match out.last_mut() {
                Some(last) if a <= last.1.saturating_add(1) => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        Self { runs: out }
    }

    pub fn from_points(points: impl IntoIterator<Item = u64>) -> Self {
        Self::from_intervals(points.into_iter().map(|p| (p, p)))
    }

    pub fn intervals(&self) -> &[(u64, u64)] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Number of members.
    pub fn len(&self) -> u64 {
        self.runs.iter().map(|(a, b)| b - a + 1).sum()
    }

    pub fn min(&self) -> Option<u64> {
        self.runs.first().map(|r| r.0)
    }

    pub fn max(&self) -> Option<u64> {
        self.runs.last().map(|r| r.1)
    }

    pub fn contains(&self, x: u64) -> bool {
        let i = self.runs.partition_point(|r| r.1 < x);
        self.runs.get(i).is_some_and(|r| r.0 <= x)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.runs.iter().flat_map(|&(a, b)| a..=b)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_intervals(self.runs.iter().chain(&other.runs).copied())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.runs.len() && j < other.runs.len() {
            let (a, b) = self.runs[i];
            let (c, d) = other.runs[j];
            let (lo, hi) = (a.max(c), b.min(d));
            if lo <= hi {
                out.push((lo, hi));
            }
            if b < d {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_intervals(out)
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let mut j = 0;
        for &(a, b) in &self.runs {
            let mut start = a;
            while j < other.runs.len() && other.runs[j].1 < start {
                j += 1;
            }
            let mut k = j;
            let mut open = true;
            while k < other.runs.len() && other.runs[k].0 <= b {
                let (c, d) = other.runs[k];
                if c > start {
                    out.push((start, c - 1));
                }
                if d >= b {
                    open = false;
                    break;
                }
                start = d + 1;
                k += 1;
            }
            if open {
                out.push((start, b));
            }
        }
        Self::from_intervals(out)
    }

    /// Members in `[lo, hi]`.
    pub fn clip(&self, lo: u64, hi: u64) -> Self {
        self.intersection(&Self::interval(lo, hi))
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }
}

impl FromIterator<u64> for IndexSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        Self::from_points(iter)
    }
}

/// `[a,b] ∪ {c} ∪ …`, or `∅`.
impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return write!(f, "∅");
        }
        for (i, &(a, b)) in self.runs.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            if a == b {
                write!(f, "{{{a}}}")?;
            } else {
                write!(f, "[{a},{b}]")?;
            }
        }
        Ok(())
    }
}

/// Serialized as a list of `[a, b]` pairs.
impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.runs.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_merges_adjacent_runs() {
        let s = IndexSet::from_intervals([(5, 7), (1, 3), (4, 4), (10, 9)]);
        assert_eq!(s.intervals(), &[(1, 7)]);
        assert_eq!(IndexSet::from_points([3, 1, 2, 9]).intervals(), &[(1, 3), (9, 9)]);
    }

    #[test]
    fn set_algebra() {
        let a = IndexSet::from_intervals([(0, 10), (20, 30)]);
        let b = IndexSet::from_intervals([(5, 22), (29, 40)]);
        assert_eq!(a.intersection(&b).intervals(), &[(5, 10), (20, 22), (29, 30)]);
        assert_eq!(a.difference(&b).intervals(), &[(0, 4), (23, 28)]);
        assert_eq!(b.difference(&a).intervals(), &[(11, 19), (31, 40)]);
        assert_eq!(a.union(&b).intervals(), &[(0, 40)]);
        assert_eq!(a.len(), 22);
        assert!(a.contains(20) && !a.contains(15) && !a.contains(31));
        assert_eq!(a.to_string(), "[0,10] ∪ [20,30]");
    }

    #[test]
    fn difference_with_point_holes() {
        let a = IndexSet::interval(0, 10);
        let holes = IndexSet::from_points([0, 3, 10]);
        assert_eq!(a.difference(&holes).intervals(), &[(1, 2), (4, 9)]);
        assert!(IndexSet::from_points([3]).is_subset(&a));
    }
}
