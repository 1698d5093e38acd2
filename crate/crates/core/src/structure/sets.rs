//! Index sets used to reason about what the trailing heads can and cannot see.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::engine::PositionLog;
use crate::rational::Rational;
use crate::sequence::{phi_boundaries, valuation, PrimeTable};
use crate::structure::{IndexSet, StructureError};

fn floor_mul(eta: &Rational, x: u64) -> i128 {
    (eta * Rational::from(BigInt::from(x)))
        .floor()
        .to_integer()
        .to_i128()
        .expect("fits")
}

fn ceil_mul(eta: &Rational, x: u64) -> i128 {
    (eta * Rational::from(BigInt::from(x)))
        .ceil()
        .to_integer()
        .to_i128()
        .expect("fits")
}

/// `⋃_i [⌊η_i m⌋ - |T|, ⌈η_i n⌉ + |T|]`, clipped below at 0.
pub fn u_oblivious(m: u64, n: u64, speeds: &[Rational], timer_size: u64) -> IndexSet {
    let t = timer_size as i128;
    IndexSet::from_intervals(speeds.iter().filter_map(|eta| {
        let a = (floor_mul(eta, m) - t).max(0);
        let b = ceil_mul(eta, n) + t;
        (b >= 0).then_some((a as u64, b as u64))
    }))
}

/// `[0, m-1] ∩ ⋃_i [π_i(m-1), π_i(m-1) + n - m + 1]` from recorded positions.
pub fn u_adaptive(m: u64, n: u64, log: &PositionLog) -> Result<IndexSet, StructureError> {
    if m == 0 || m > n {
        return Err(StructureError::Parameter(format!("need 1 ≤ m ≤ n, got m={m} n={n}")));
    }
    let positions = log.at(m - 1).ok_or(StructureError::TraceTooShort(m - 1))?;
    let reach = n - m + 1;
    Ok(IndexSet::from_intervals(positions.iter().map(|&p| (p, p + reach))).clip(0, m - 1))
}

/// Indices in `[0, n]` that `Φ_h` overwrites: the markers and every multiple of
/// `h+1` strictly inside an interval.
pub fn overwritten_set_a(h: u64, n: u64) -> IndexSet {
    let mut points = Vec::new();
    for k in 0.. {
        let Ok((s, t)) = phi_boundaries(h, k) else { break };
        if s > n {
            break;
        }
        points.push(s);
        let first = (s / (h + 1) + 1) * (h + 1);
        let last = (t - 1).min(n);
        points.extend((first..=last).step_by(h as usize + 1));
        if t <= n {
            points.push(t);
        }
    }
    IndexSet::from_points(points)
}

/// `V` and `W = [0, m] \ V` for one reference slot `j`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RefSets {
    pub j: u64,
    pub v: IndexSet,
    pub w: IndexSet,
}

/// `V = { ℓ·j/(h+1) : ℓ ∈ (s_k, t_k) ∩ [m, n], ℓ ≡ 0 mod (h+1) }`.
pub fn phi_ref_set(h: u64, m: u64, n: u64, k: u32, j: u64) -> Result<RefSets, StructureError> {
    if m > n {
        return Err(StructureError::Parameter(format!("m={m} exceeds n={n}")));
    }
    let (s, t) = phi_boundaries(h, k).map_err(|e| StructureError::Parameter(e.to_string()))?;
    let lo = m.max(s + 1);
    let hi = n.min(t.saturating_sub(1));
    let v = if lo > hi {
        IndexSet::new()
    } else {
        let first = lo.div_ceil(h + 1) * (h + 1);
        IndexSet::from_points((first..=hi).step_by(h as usize + 1).map(|l| l / (h + 1) * j))
    };
    let w = IndexSet::interval(0, m).difference(&v);
    Ok(RefSets { j, v, w })
}

/// [`phi_ref_set`] for every `j ∈ 1..h-1`.
pub fn phi_ref_sets(h: u64, m: u64, n: u64, k: u32) -> Result<Vec<RefSets>, StructureError> {
    (1..h).map(|j| phi_ref_set(h, m, n, k, j)).collect()
}

/// `V_i(m, n)`: for each `k ∈ [m, n]`, the leaf reached from `k` by always
/// taking child `i`, with the path truncated at depth `d`.
///
/// Truncation uses exponent `min(ν_{h+1}(k), d)` so that roots deeper than `d`
/// still contribute their depth-`d` frontier node.
pub fn hier_leaf_set(h: usize, d: u32, m: u64, n: u64, i: usize) -> Result<IndexSet, StructureError> {
    if i == 0 || i > h || m == 0 || m > n {
        return Err(StructureError::Parameter(format!(
            "need 1 ≤ i ≤ h and 1 ≤ m ≤ n, got h={h} i={i} m={m} n={n}"
        )));
    }
    let primes = PrimeTable::up_to_index(h + 1);
    let (pi, p) = (primes.get(i), primes.get(h + 1));
    let mut points = Vec::with_capacity((n - m + 1) as usize);
    for k in m..=n {
        let depth = valuation(h + 1, k).expect("k ≥ 1").min(d);
        let mut x = k;
        for _ in 0..depth {
            x = x / p * pi;
        }
        points.push(x);
    }
    Ok(IndexSet::from_points(points))
}

/// The closure of `v` under `x ↦ x·p_{h+1}/p_j` (integer results only), up to `horizon`.
pub fn closure(v: &IndexSet, h: usize, horizon: u64) -> IndexSet {
    let primes = PrimeTable::up_to_index(h + 1);
    let p = primes.get(h + 1);
    let mut seen: HashSet<u64> = HashSet::new();
    let mut stack: Vec<u64> = v.iter().collect();
    let mut out = Vec::new();
    while let Some(x) = stack.pop() {
        if !seen.insert(x) {
            continue;
        }
        out.push(x);
        for j in 1..=h {
            let pj = primes.get(j);
            if x % pj == 0 {
                if let Some(y) = (x / pj).checked_mul(p) {
                    if y <= horizon && !seen.contains(&y) {
                        stack.push(y);
                    }
                }
            }
        }
    }
    IndexSet::from_points(out)
}

/// A rational `γ` with `max{η_{h-1}, η_</η, η/η_>} < γ² < 1` for `η = j/(h+1)`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ObliviousGamma {
    /// `max{η_{h-1}, η_</η, η/η_>}`, the exact lower bound on `γ²`.
    pub lower_sq: String,
    pub gamma: String,
    #[serde(skip)]
    pub gamma_value: Rational,
}

/// `γ` for slot `j` against trailing speeds `speeds`; `None` when `j/(h+1)` is a speed.
pub fn oblivious_gamma(h: u64, j: u64, speeds: &[Rational]) -> Option<ObliviousGamma> {
    let eta = Rational::new(BigInt::from(j), BigInt::from(h + 1));
    if speeds.contains(&eta) {
        return None;
    }
    let one = Rational::from(BigInt::from(1));
    let mut all: Vec<Rational> = speeds.to_vec();
    all.push(one.clone());
    let below = all
        .iter()
        .filter(|&s| *s < eta)
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero);
    let above = all
        .iter()
        .filter(|&s| *s > eta)
        .min()
        .cloned()
        .unwrap_or_else(|| one.clone());
    let fastest_trailing = speeds.iter().max().cloned().unwrap_or_else(Rational::zero);
    let lower_sq = [fastest_trailing, &below / &eta, &eta / &above]
        .into_iter()
        .max()
        .expect("three candidates");
    // Midpoint of (sqrt(lower_sq), 1), rounded up to a multiple of 1/10^6 and checked exactly.
    let root = crate::rational::to_f64(&lower_sq).sqrt();
    let den = 1_000_000i64;
    let mut num = (((1.0 + root) / 2.0) * den as f64).ceil() as i64;
    loop {
        let gamma = Rational::new(BigInt::from(num), BigInt::from(den));
        if &gamma * &gamma > lower_sq {
            if gamma >= one {
                return None;
            }
            return Some(ObliviousGamma {
                lower_sq: crate::rational::format_rational(&lower_sq),
                gamma: crate::rational::format_rational(&gamma),
                gamma_value: gamma,
            });
        }
        num += 1;
    }
}

/// Smallest `k` with `n ∈ (s_k, s_{k+1}]`, or `None` when `n ≤ s_0`.
pub fn phi_epoch(h: u64, n: u64) -> Option<u32> {
    (0u32..).find_map(|k| {
        let (s, _) = phi_boundaries(h, k).ok()?;
        let (s_next, _) = phi_boundaries(h, k + 1).unwrap_or((u64::MAX, u64::MAX));
        if n <= s {
            Some(None)
        } else if n <= s_next {
            Some(Some(k))
        } else {
            None
        }
    })?
}

/// Multiples of `h+1` in `[lo, hi]`.
pub fn residue_class(h: u64, lo: u64, hi: u64) -> IndexSet {
    if lo > hi {
        return IndexSet::new();
    }
    let first = lo.div_ceil(h + 1) * (h + 1);
    IndexSet::from_points((first..=hi).step_by(h as usize + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn oblivious_windows() {
        assert_eq!(u_oblivious(100, 200, &[ratio(1, 2)], 3).intervals(), &[(47, 103)]);
        let u = u_oblivious(1000, 1100, &[ratio(2, 5), ratio(3, 5)], 5);
        assert_eq!(u.intervals(), &[(395, 445), (595, 665)]);
    }

    #[test]
    fn overwritten_indices() {
        assert_eq!(overwritten_set_a(2, 30), IndexSet::from_points([2, 3, 18, 21, 24, 27]));
        assert_eq!(overwritten_set_a(2, 17), IndexSet::from_points([2, 3]));
    }

    #[test]
    fn overwrite_density_tracks_rho1() {
        for h in [2u64, 3] {
            let k_max = 5;
            let (_, t) = phi_boundaries(h, k_max).unwrap();
            // Two markers plus the multiples of h+1 strictly inside every (s_k, t_k).
            let counted: u64 = (0..=k_max)
                .map(|k| {
                    let (s, t) = phi_boundaries(h, k).unwrap();
                    2 + (t - 1) / (h + 1) - s / (h + 1)
                })
                .sum();
            let a = overwritten_set_a(h, t);
            assert_eq!(a.len(), counted);
            let density = a.len() as f64 / t as f64;
            assert!((density - 1.0 / (h * (h + 2)) as f64).abs() < 2e-3, "h={h}: {density}");
        }
    }

    #[test]
    fn reference_sets() {
        let r = phi_ref_set(2, 20, 25, 1, 1).unwrap();
        assert_eq!(r.v, IndexSet::from_points([7, 8]));
        assert_eq!(r.w, IndexSet::from_intervals([(0, 6), (9, 20)]));
        let outside = phi_ref_set(2, 28, 100, 1, 1).unwrap();
        assert!(outside.v.is_empty());
        assert_eq!(outside.w, IndexSet::interval(0, 28));
    }

    #[test]
    fn golden_leaf_sets() {
        let v1 = hier_leaf_set(2, 2, 298, 305, 1).unwrap();
        assert_eq!(v1, IndexSet::from_points([48, 122, 298, 299, 301, 302, 303, 304]));
        let v2 = hier_leaf_set(2, 2, 298, 305, 2).unwrap();
        assert_eq!(v2, IndexSet::from_points([108, 183, 298, 299, 301, 302, 303, 304]));
        let d1 = hier_leaf_set(2, 1, 298, 305, 1).unwrap();
        assert_eq!(d1, IndexSet::from_points([120, 122, 298, 299, 301, 302, 303, 304]));
    }

    #[test]
    fn closure_of_a_leaf() {
        let c = closure(&IndexSet::from_points([48]), 2, 300);
        for x in [48, 120, 300, 80] {
            assert!(c.contains(x), "{x}");
        }
        let c = closure(&IndexSet::from_points([299]), 2, 10_000);
        assert_eq!(c, IndexSet::from_points([299]));
    }

    #[test]
    fn epochs() {
        assert_eq!(phi_epoch(2, 2), None);
        assert_eq!(phi_epoch(2, 3), Some(0));
        assert_eq!(phi_epoch(2, 18), Some(0));
        assert_eq!(phi_epoch(2, 6561), Some(3));
    }
}
