//! Index structure of the `Φ_h` family: `$` markers at `s_k = (h+1)^{2k}·h` and
//! `t_k = (h+1)^{2k+1}`, parity indices inside `(s_k, t_k)`.

use crate::sequence::SequenceError;

/// `(s_k, t_k)`, or `Overflow` when either does not fit in 64 bits.
pub fn phi_boundaries(h: u64, k: u32) -> Result<(u64, u64), SequenceError> {
    if h < 2 {
        return Err(SequenceError::Parameter(format!("Φ needs h ≥ 2, got {h}")));
    }
    let base = h + 1;
    let even = base.checked_pow(2 * k).ok_or(SequenceError::Overflow)?;
    let s = even.checked_mul(h).ok_or(SequenceError::Overflow)?;
    let t = even.checked_mul(base).ok_or(SequenceError::Overflow)?;
    Ok((s, t))
}

/// All `(k, s_k, t_k)` with `s_k ≤ n_max`.
pub fn phi_intervals_upto(h: u64, n_max: u64) -> Vec<(u32, u64, u64)> {
    let mut out = Vec::new();
    for k in 0.. {
        match phi_boundaries(h, k) {
            Ok((s, t)) if s <= n_max => out.push((k, s, t)),
            _ => break,
        }
    }
    out
}

/// Sorted marker positions `s_k, t_k ≤ n_max`.
pub fn phi_markers_upto(h: u64, n_max: u64) -> Vec<u64> {
    phi_intervals_upto(h, n_max)
        .into_iter()
        .flat_map(|(_, s, t)| [s, t])
        .filter(|&x| x <= n_max)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiIndex {
    /// `n` is `s_k` or `t_k`.
    Marker { k: u32 },
    /// `n ∈ (s_k, t_k)` with `n ≡ 0 (mod h+1)`.
    Parity { k: u32 },
    /// Inside `(s_k, t_k)` but not a multiple of `h+1`.
    Interior { k: u32 },
    /// Between intervals (or before `s_0`).
    Free,
}

pub fn classify_phi(h: u64, n: u64) -> PhiIndex {
    for k in 0.. {
        let Ok((s, t)) = phi_boundaries(h, k) else {
            return PhiIndex::Free;
        };
        if n < s {
            return PhiIndex::Free;
        }
        if n == s || n == t {
            return PhiIndex::Marker { k };
        }
        if n < t {
            return if n.is_multiple_of(h + 1) {
                PhiIndex::Parity { k }
            } else {
                PhiIndex::Interior { k }
            };
        }
    }
    unreachable!("loop exits on overflow")
}

/// Referenced indices of a parity position in interval `k`: `i·n/(h+1)` for
/// `i = 1..h-2`, then `(h - k mod 2)·n/(h+1)`.
pub fn phi_references(h: u64, k: u32, n: u64) -> Vec<u64> {
    let unit = n / (h + 1);
    let mut refs: Vec<u64> = (1..h - 1).map(|i| i * unit).collect();
    refs.push((h - (k as u64 % 2)) * unit);
    refs
}

/// Parents of `n` in the dependency structure (empty unless `n` is a parity index).
pub fn phi_parents(h: u64, n: u64) -> Vec<u64> {
    match classify_phi(h, n) {
        PhiIndex::Parity { k } => phi_references(h, k, n),
        _ => Vec::new(),
    }
}

/// Incremental classifier for increasing indices.
#[derive(Debug, Clone)]
pub(crate) struct PhiCursor {
    h: u64,
    k: u32,
    s: u64,
    t: u64,
    exhausted: bool,
}

impl PhiCursor {
    pub(crate) fn new(h: u64) -> Self {
        let (s, t) = phi_boundaries(h, 0).expect("k = 0 never overflows");
        Self {
            h,
            k: 0,
            s,
            t,
            exhausted: false,
        }
    }

    /// Classifies `n`; calls must use non-decreasing `n`.
    pub(crate) fn classify(&mut self, n: u64) -> PhiIndex {
        while !self.exhausted && n > self.t {
            self.k += 1;
            match phi_boundaries(self.h, self.k) {
                Ok((s, t)) => {
                    self.s = s;
                    self.t = t;
                }
                Err(_) => self.exhausted = true,
            }
        }
        if self.exhausted || n < self.s {
            PhiIndex::Free
        } else if n == self.s || n == self.t {
            PhiIndex::Marker { k: self.k }
        } else if n.is_multiple_of(self.h + 1) {
            PhiIndex::Parity { k: self.k }
        } else {
            PhiIndex::Interior { k: self.k }
        }
    }
}
