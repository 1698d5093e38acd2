use std::collections::{HashSet, VecDeque};

use mhgale::engine::BoundaryFamily;
use mhgale::engine::{run_observed, CheckpointSchedule, RunConfig, StepObserver};
use mhgale::gamblers::{
    build_phi_tracker, verify_tracking, ModeSchedule, Pace, PhiTracker, PhiTrackerParams, Provenance, TrackerState,
    TrackingLog, ViolationKind,
};
use mhgale::model::{reachable_states, Gambler, ValidationLimits};
use mhgale::rational::ratio;
use mhgale::sequence::{phi_boundaries, BitSource, SymbolSequence, SymbolSource};

fn tracker(h: u32, l: u32) -> PhiTracker {
    build_phi_tracker(&PhiTrackerParams::new(h, l, ratio(1, 64))).unwrap()
}

fn tracked_run(
    g: &PhiTracker,
    h: u32,
    l: u32,
    seed: u64,
    n_max: u64,
) -> (mhgale::engine::RunTrace, TrackingLog, SymbolSequence) {
    let mut seq = SymbolSequence::phi(h, l, BitSource::seeded(seed)).unwrap();
    let cfg = RunConfig {
        n_max,
        s_values: vec![],
        checkpoints: CheckpointSchedule::Boundaries
            .expand(Some(BoundaryFamily::Phi { h }), n_max)
            .unwrap(),
        hedge: Some(ratio(1, 64)),
        exact: false,
    };
    let mut log = TrackingLog::new(h as u64);
    let trace = {
        let mut observers: [&mut dyn StepObserver; 1] = [&mut log];
        run_observed(g, &mut seq, &cfg, &mut observers).unwrap()
    };
    (trace, log, seq)
}

#[test]
fn tracks_every_reference_for_small_h() {
    for (h, l, k) in [(2, 1, 5), (2, 2, 4), (3, 1, 3), (4, 1, 2), (5, 2, 2)] {
        let g = tracker(h, l);
        let (_, t) = phi_boundaries(h as u64, k).unwrap();
        let (trace, log, seq) = tracked_run(&g, h, l, 11, t + 1);
        let report = verify_tracking(&log, &seq, h as u64, 1);
        assert!(report.checked > 0, "h={h}");
        assert!(
            report.ok(),
            "h={h} L={l}: {:?}",
            &report.violations[..report.violations.len().min(3)]
        );
        let last = trace.last().unwrap();
        assert_eq!(last.parity_losses, 0, "h={h}");
        assert_eq!(last.full_wins + last.marker_misses, last.parity_bets);
    }
}

#[test]
fn perturbed_schedule_is_caught() {
    let params = PhiTrackerParams::new(2, 1, ratio(1, 64));
    let mut sched = ModeSchedule::derived(2).with_provenance(Provenance::Custom);
    sched.move1 = Pace::new(sched.move1.moves - 1, sched.move1.period);
    let g = PhiTracker::with_schedule(&params, sched).unwrap();
    let (_, t1) = phi_boundaries(2, 1).unwrap();
    let (_, log, seq) = tracked_run(&g, 2, 1, 5, t1 + 1);
    let report = verify_tracking(&log, &seq, 2, 1);
    let k1: Vec<_> = log.records().iter().filter(|r| r.k == 1).collect();
    assert!(!k1.is_empty());
    let flagged: HashSet<u64> = report
        .violations
        .iter()
        .filter(|v| v.kind == ViolationKind::LastHead)
        .map(|v| v.n)
        .collect();
    assert!(k1.iter().all(|r| flagged.contains(&r.n)));
}

/// Abstract tracker: (mode, r, cnt, acc) with acc `Some(Some(b))` a block,
/// `Some(None)` the marker and `None` nothing.
type Abstract = (i32, u64, u64, Option<Option<u64>>);

fn abstract_reachable(h: u64, blocks: u64, paces: [(u64, u64); 5]) -> usize {
    let pace = |mode: i32| paces[(mode + 1) as usize];
    // Observations differ only in: any inner head on $, head h-1 value, leading on $.
    let mut obs_kinds = Vec::new();
    for inner_marker in [false, true] {
        for last in (0..blocks).map(Some).chain([None]) {
            for lead_marker in [false, true] {
                for xor_inner in 0..blocks {
                    if h == 2 && (inner_marker || xor_inner > 0) {
                        continue;
                    }
                    obs_kinds.push((inner_marker, last, lead_marker, xor_inner));
                }
            }
        }
    }
    let start: Abstract = (-1, 0, 0, None);
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((mode, r, cnt, _)) = queue.pop_front() {
        for &(inner_marker, last, lead_marker, xor_inner) in &obs_kinds {
            let r2 = (r + 1) % (h + 1);
            let acc = match (r2, last) {
                (0, None) => Some(None),
                (0, Some(_)) if inner_marker => None,
                (0, Some(b)) => Some(Some(b ^ xor_inner)),
                _ => None,
            };
            let (mode2, cnt2) = if lead_marker {
                (if mode < 0 { 0 } else { (mode + 1) % 4 }, 0)
            } else if mode == 0 || mode == 2 {
                (mode, 0)
            } else {
                (mode, (cnt + 1) % pace(mode).1)
            };
            let next = (mode2, r2, cnt2, acc);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    seen.len()
}

#[test]
fn reachable_state_count_matches_abstract_model() {
    for (h, l) in [(2u32, 1u32), (2, 2), (3, 1)] {
        let g = tracker(h, l);
        let s = g.schedule();
        let paces = [s.start, s.bet0, s.move1, s.bet2, s.move3].map(|p| (p.moves, p.period));
        let (states, _) = reachable_states(&g, ValidationLimits::default()).unwrap();
        assert_eq!(states.len(), abstract_reachable(h as u64, 1 << l, paces), "h={h} L={l}");
        assert_eq!(g.heads(), h as usize);
    }
    let (states, _) = reachable_states(&tracker(2, 1), ValidationLimits::default()).unwrap();
    assert_eq!(states.len(), 166);
}

/// Records every step at which the packed mode changes.
struct ModeChanges {
    alphabet_dollar: u8,
    changes: Vec<u64>,
    dollar_steps: Vec<u64>,
}

impl StepObserver for ModeChanges {
    fn observe(&mut self, step: &mhgale::engine::StepView<'_>) {
        if TrackerState::unpack(step.state).mode != TrackerState::unpack(step.next).mode {
            self.changes.push(step.n);
        }
        if *step.observed.last().unwrap() == self.alphabet_dollar {
            self.dollar_steps.push(step.n);
        }
    }
}

#[test]
fn mode_changes_exactly_on_markers() {
    for (h, l) in [(2u32, 1u32), (3, 2)] {
        let g = tracker(h, l);
        let (_, t) = phi_boundaries(h as u64, 3).unwrap();
        let mut seq = SymbolSequence::phi(h, l, BitSource::seeded(2)).unwrap();
        let dollar = seq.alphabet().dollar().unwrap();
        let cfg = RunConfig {
            n_max: t + 1,
            s_values: vec![],
            checkpoints: vec![t + 1],
            hedge: None,
            exact: false,
        };
        let mut obs = ModeChanges {
            alphabet_dollar: dollar,
            changes: vec![],
            dollar_steps: vec![],
        };
        {
            let mut observers: [&mut dyn StepObserver; 1] = [&mut obs];
            run_observed(&g, &mut seq, &cfg, &mut observers).unwrap();
        }
        let markers = mhgale::sequence::phi_markers_upto(h as u64, t);
        assert_eq!(obs.dollar_steps, markers);
        assert_eq!(obs.changes, markers, "h={h}");
    }
}
