//! Movement schedule of the Φ-tracker's last trailing head and the integer
//! oracle that checks it against the positions the parity bets require.

use num_integer::Integer;
use serde::Serialize;

use crate::sequence::phi_boundaries;

/// `(moves, period)`: the head moves on the first `moves` of every `period` steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Pace {
    pub moves: u64,
    pub period: u64,
}

impl Pace {
    pub const fn new(moves: u64, period: u64) -> Self {
        Self { moves, period }
    }

    /// Moves made in the first `len` steps of a phase starting at counter 0.
    pub fn moves_in(&self, len: u64) -> u64 {
        (len / self.period) * self.moves + (len % self.period).min(self.moves)
    }
}

impl std::fmt::Display for Pace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.moves, self.period)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Literal,
    Derived,
    Custom,
}

/// Per-mode pace of head `h-1`.
///
/// Counter modes (start, move1, move3) restart their counter whenever the
/// leading head reads `$`. Betting modes (bet0, bet2) are phased on the global
/// position: the head moves at step `n` iff `n mod (h+1) < moves`, so their
/// period must be `h+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModeSchedule {
    pub start: Pace,
    pub bet0: Pace,
    pub move1: Pace,
    pub bet2: Pace,
    pub move3: Pace,
    pub provenance: Provenance,
}

impl ModeSchedule {
    /// The constants as stated for the five-mode machine.
    pub fn literal(h: u64) -> Self {
        let p = h * h * h + 2 * h * h - 1;
        Self {
            start: Pace::new(h - 1, h + 1),
            bet0: Pace::new(h - 1, h + 1),
            move1: Pace::new(h * h * h + h * h - h + 1, p),
            bet2: Pace::new(h - 1, h + 1),
            move3: Pace::new(h * h * h - 2 * h, p),
            provenance: Provenance::Literal,
        }
    }

    /// Constants recomputed from displacement/steps between interval endpoints.
    ///
    /// Betting paces are the reference ratios `h/(h+1)` (even `k`) and
    /// `(h-1)/(h+1)` (odd `k`); each repositioning leg `t_k → s_{k+1}` covers
    /// `(h+1)^{2k}·(h³+2h²-1)` steps.
    pub fn derived(h: u64) -> Self {
        let leg = |k: u32, from: u64, to: u64| {
            let (_, t) = phi_boundaries(h, k).expect("small k");
            let (s_next, _) = phi_boundaries(h, k + 1).expect("small k");
            let steps = s_next - t;
            let shift = (to * s_next - from * t) / (h + 1);
            let g = steps.gcd(&shift);
            Pace::new(shift / g, steps / g)
        };
        Self {
            start: Pace::new(h, h + 1),
            bet0: Pace::new(h, h + 1),
            move1: leg(0, h, h - 1),
            bet2: Pace::new(h - 1, h + 1),
            move3: leg(1, h - 1, h),
            provenance: Provenance::Derived,
        }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn describe(&self) -> String {
        format!(
            "start {} bet0 {} move1 {} bet2 {} move3 {}",
            self.start, self.bet0, self.move1, self.bet2, self.move3
        )
    }

    /// Pace of counter mode or betting mode `mode` (`-1` is the start mode).
    pub fn pace(&self, mode: i8) -> Pace {
        match mode {
            -1 => self.start,
            0 => self.bet0,
            1 => self.move1,
            2 => self.bet2,
            3 => self.move3,
            _ => panic!("mode {mode} outside -1..=3"),
        }
    }
}

/// `#{j ∈ [a, b) : j mod m < c}`.
fn phased_moves(a: u64, b: u64, c: u64, m: u64) -> u64 {
    let f = |x: u64| (x / m) * c + (x % m).min(c);
    f(b) - f(a)
}

/// `π_{h-1}(n)` when `$` sits exactly at every `s_k`, `t_k` and the head follows
/// `schedule`. Mode changes take effect on the step after the `$` is read.
pub fn scheduled_position(h: u64, schedule: &ModeSchedule, n: u64) -> u64 {
    // Segments of steps [from, to) per mode: start [0, s_0 + 1), then
    // betting (s_k, t_k] and repositioning (t_k, s_{k+1}].
    let (s0, _) = phi_boundaries(h, 0).expect("k = 0");
    let mut pos = schedule.start.moves_in(n.min(s0 + 1));
    if n <= s0 + 1 {
        return pos;
    }
    for k in 0u32.. {
        let (s, t) = phi_boundaries(h, k).expect("n fits, so do its boundaries");
        let bet = if k % 2 == 0 { schedule.bet0 } else { schedule.bet2 };
        pos += phased_moves(s + 1, n.min(t + 1), bet.moves, h + 1);
        if n <= t + 1 {
            return pos;
        }
        let (s_next, _) = phi_boundaries(h, k + 1).expect("n fits, so do its boundaries");
        let leg = if k % 2 == 0 { schedule.move1 } else { schedule.move3 };
        pos += leg.moves_in(n.min(s_next + 1) - (t + 1));
        if n <= s_next + 1 {
            return pos;
        }
    }
    unreachable!()
}

/// First disagreement found by [`check_schedule`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScheduleFailure {
    pub k: u32,
    /// Leading position of the parity bet.
    pub n: u64,
    pub required: u64,
    pub scheduled: u64,
}

/// Parity positions checked exhaustively per interval; larger intervals are
/// sampled at both ends and at evenly spaced interior points.
const EXHAUSTIVE_LIMIT: u64 = 4096;

/// Checks that for every interval `k ≤ k_max` and every parity index `n` in
/// `(s_k, t_k)` the head sits at `(h - k mod 2)·n/(h+1)` on step `n-1`.
pub fn check_schedule(h: u64, schedule: &ModeSchedule, k_max: u32) -> Result<(), ScheduleFailure> {
    for pace in [schedule.bet0, schedule.bet2] {
        if pace.period != h + 1 {
            return Err(ScheduleFailure {
                k: 0,
                n: 0,
                required: h + 1,
                scheduled: pace.period,
            });
        }
    }
    for k in 0..=k_max {
        let Ok((s, t)) = phi_boundaries(h, k) else {
            break;
        };
        let ratio = h - (k as u64 % 2);
        let first = (s / (h + 1) + 1) * (h + 1);
        if first >= t {
            continue;
        }
        let count = (t - 1 - first) / (h + 1) + 1;
        let indices: Vec<u64> = if count <= EXHAUSTIVE_LIMIT {
            (0..count).collect()
        } else {
            let step = count / EXHAUSTIVE_LIMIT;
            (0..EXHAUSTIVE_LIMIT).map(|i| i * step).chain([count - 1]).collect()
        };
        for i in indices {
            let n = first + i * (h + 1);
            let required = ratio * n / (h + 1);
            let scheduled = scheduled_position(h, schedule, n - 1);
            if required != scheduled {
                return Err(ScheduleFailure {
                    k,
                    n,
                    required,
                    scheduled,
                });
            }
        }
    }
    Ok(())
}

/// Largest `k` whose `t_k` stays below `2^62` (so positions fit comfortably).
pub fn oracle_horizon(h: u64) -> u32 {
    (0u32..)
        .take_while(|&k| phi_boundaries(h, k).is_ok_and(|(_, t)| t < 1 << 62))
        .last()
        .unwrap_or(0)
}
