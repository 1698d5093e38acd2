//! The finite ratio sets behind the hierarchy disjointness argument, and the
//! check that some closure avoids the trailing-head window.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::rational::{format_rational, to_f64, Rational};
use crate::sequence::PrimeTable;
use crate::structure::IndexSet;

/// `T_1..T_h`, the gap `ζ` and the constant `γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioConstants {
    pub h: usize,
    pub d: u32,
    /// Sorted, each `T_i ⊂ (0, 1)`.
    pub t_sets: Vec<Vec<Rational>>,
    /// Smallest distance between distinct members of `⋃ T_i`, if there are two.
    pub min_gap: Option<Rational>,
    /// `99/100` of the minimum gap (or `99/100` itself when `|T| < 2`).
    pub zeta: Rational,
    /// Midpoint of `(2/(2+ζ), 1)`.
    pub gamma: Rational,
}

fn r(n: u64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Enumerates `(p_i/p)^t · p^{a_1+…+a_h} / (p_1^{a_1}⋯p_h^{a_h}) ∈ (0, 1)` for `t ≤ d`.
///
/// Each factor `p/p_j` exceeds 1, so the search along any exponent stops once
/// the value reaches 1.
pub fn ratio_constants(h: usize, d: u32) -> RatioConstants {
    assert!(h >= 1, "ratio sets need h ≥ 1");
    let primes = PrimeTable::up_to_index(h + 1);
    let p = r(primes.get(h + 1));
    let steps: Vec<Rational> = (1..=h).map(|j| &p / r(primes.get(j))).collect();
    let one = Rational::one();
    let mut t_sets = Vec::with_capacity(h);
    for i in 1..=h {
        let ratio = r(primes.get(i)) / &p;
        let mut found = Vec::new();
        let mut base = one.clone();
        for _ in 1..=d {
            base = &base * &ratio;
            // Non-decreasing exponent index avoids revisiting permutations.
            let mut stack = vec![(base.clone(), 0usize)];
            while let Some((value, from)) = stack.pop() {
                found.push(value.clone());
                for (j, step) in steps.iter().enumerate().skip(from) {
                    let next = &value * step;
                    if next < one {
                        stack.push((next, j));
                    }
                }
            }
        }
        found.sort();
        found.dedup();
        t_sets.push(found);
    }
    let mut all: Vec<&Rational> = t_sets.iter().flatten().collect();
    all.sort();
    let min_gap = all.windows(2).map(|w| w[1] - w[0]).min();
    let margin = Rational::new(BigInt::from(99), BigInt::from(100));
    let zeta = match &min_gap {
        Some(g) => g * &margin,
        None => margin,
    };
    let two = r(2);
    let lower = &two / (&two + &zeta);
    let gamma = (lower + &one) / &two;
    RatioConstants {
        h,
        d,
        t_sets,
        min_gap,
        zeta,
        gamma,
    }
}

impl RatioConstants {
    /// `true` when no ratio lies in two of the `T_i`.
    pub fn pairwise_disjoint(&self) -> bool {
        let mut all: Vec<&Rational> = self.t_sets.iter().flatten().collect();
        let total = all.len();
        all.sort();
        all.dedup();
        all.len() == total
    }

    /// Smallest `n` for which `γnζ - (1-γ)n > (1-γ)n + 1`, i.e. the window is
    /// narrower than the spacing between closures.
    pub fn threshold_n(&self) -> Option<u64> {
        let one = Rational::one();
        let slope = &self.gamma * &self.zeta - r(2) * (&one - &self.gamma);
        if slope <= Rational::from(BigInt::from(0)) {
            return None;
        }
        Some((&one / slope).floor().to_integer().try_into().unwrap_or(u64::MAX) + 1)
    }

    pub fn summary(&self) -> RatioSummary {
        RatioSummary {
            h: self.h,
            d: self.d,
            t_sets: self
                .t_sets
                .iter()
                .map(|t| t.iter().map(format_rational).collect())
                .collect(),
            min_gap: self.min_gap.as_ref().map(format_rational),
            zeta: format_rational(&self.zeta),
            gamma: format_rational(&self.gamma),
            gamma_approx: to_f64(&self.gamma),
            pairwise_disjoint: self.pairwise_disjoint(),
            threshold_n: self.threshold_n(),
        }
    }
}

/// Serializable view of [`RatioConstants`] with rationals as `num/den`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSummary {
    pub h: usize,
    pub d: u32,
    pub t_sets: Vec<Vec<String>>,
    pub min_gap: Option<String>,
    pub zeta: String,
    pub gamma: String,
    pub gamma_approx: f64,
    pub pairwise_disjoint: bool,
    pub threshold_n: Option<u64>,
}

/// Outcome of [`disjointness_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Disjointness {
    /// Smallest 1-based `j` whose closure misses `U`, or `None` on full coverage.
    pub j: Option<usize>,
    /// `|U ∩ closure_j|` per `j`.
    pub overlaps: Vec<u64>,
}

pub fn disjointness_check(u: &IndexSet, closures: &[IndexSet]) -> Disjointness {
    let overlaps: Vec<u64> = closures.iter().map(|c| u.intersection(c).len()).collect();
    Disjointness {
        j: overlaps.iter().position(|&o| o == 0).map(|i| i + 1),
        overlaps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn two_head_depth_two_sets() {
        let c = ratio_constants(2, 2);
        let t1 = [
            ratio(4, 25),
            ratio(4, 15),
            ratio(2, 5),
            ratio(4, 9),
            ratio(2, 3),
            ratio(20, 27),
        ];
        let t2 = [ratio(9, 25), ratio(3, 5), ratio(9, 10)];
        assert_eq!(c.t_sets[0], t1);
        assert_eq!(c.t_sets[1], t2);
        assert_eq!(c.min_gap, Some(ratio(1, 25)));
        assert_eq!(c.zeta, ratio(99, 2500));
        assert!(c.pairwise_disjoint());
        let lower = ratio(2, 1) / (ratio(2, 1) + &c.zeta);
        assert!(c.gamma > lower && c.gamma < ratio(1, 1));
    }

    #[test]
    fn depth_zero_has_no_ratios() {
        let c = ratio_constants(2, 0);
        assert!(c.t_sets.iter().all(|t| t.is_empty()));
        assert_eq!(c.zeta, ratio(99, 100));
    }

    #[test]
    fn coverage_reporting() {
        let u = IndexSet::from_intervals([(10, 20)]);
        let closures = [IndexSet::from_points([15]), IndexSet::from_points([25])];
        assert_eq!(disjointness_check(&u, &closures).j, Some(2));
        assert_eq!(disjointness_check(&IndexSet::new(), &closures).j, Some(1));
        let full = disjointness_check(&IndexSet::interval(0, 30), &closures);
        assert_eq!(full.j, None);
        assert_eq!(full.overlaps, vec![1, 1]);
    }
}
