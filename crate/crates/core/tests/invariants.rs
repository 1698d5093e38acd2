mod common;

use std::collections::BTreeSet;

use mhgale::alphabet::{Alphabet, Symbol};
use mhgale::engine::{exact_crosscheck, Engine, PositionLog, ReadLog, StepObserver, DRIFT_TOLERANCE};
use mhgale::model::{direct_run, embed_oblivious, oblivious_speeds, Gambler, TableSpec};
use mhgale::rational::{integer, Rational};
use mhgale::recon::{deducible_closure, leaf_expansion, DepFamily, DependencyGraph};
use mhgale::sequence::{phi_boundaries, BitSource, SymbolSequence, SymbolSource};
use mhgale::structure::{
    beta, delta1, delta2, hier_leaf_set, overwritten_set_a, phi_ref_set, u_adaptive, u_oblivious, IndexSet,
};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use rand::Rng;

fn exact_capital(g: &dyn Gambler, word: &[Symbol]) -> Rational {
    let seq = SymbolSequence::from_symbols(g.alphabet(), word).unwrap();
    let mut engine = Engine::new(g, None, true);
    while engine.n() < word.len() as u64 {
        engine.step(&seq, &mut []).unwrap();
    }
    engine.ledger().exact().unwrap()
}

fn random_word(rng: &mut impl Rng, alphabet: &Alphabet, len: usize) -> Vec<Symbol> {
    (0..len).map(|_| rng.gen_range(0..alphabet.size() as u8)).collect()
}

fn sets_from(points: &[u64]) -> (IndexSet, BTreeSet<u64>) {
    (
        IndexSet::from_points(points.iter().copied()),
        points.iter().copied().collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// `Σ_a d(wa) = |Σ|·d(w)` exactly.
    #[test]
    fn gale_identity(seed in any::<u64>(), heads in 1usize..4, len in 0usize..40, dollar in any::<bool>()) {
        let mut rng = common::rng(seed);
        let alphabet = Alphabet::new(1, dollar).unwrap();
        let g = common::random_table(&mut rng, heads, 4, alphabet, true);
        let w = random_word(&mut rng, &alphabet, len);
        let mut total = integer(0);
        for a in alphabet.symbols() {
            let mut wa = w.clone();
            wa.push(a);
            total += exact_capital(&g, &wa);
        }
        prop_assert_eq!(total, exact_capital(&g, &w) * integer(alphabet.size() as u64));
    }

    #[test]
    fn speed_bound_holds(seed in any::<u64>(), heads in 2usize..5, timer in 1usize..12) {
        let mut rng = common::rng(seed);
        let spec = common::random_oblivious(&mut rng, heads, 3, timer, Alphabet::binary());
        let speeds = oblivious_speeds(&spec);
        let steps = 5_000;
        let mut src = SymbolSequence::raw(1, BitSource::seeded(seed)).unwrap();
        let run = direct_run(&spec, &mut src, steps).unwrap();
        for n in (0..=steps).step_by(37) {
            for (i, eta) in speeds.iter().enumerate() {
                let dev = Rational::from(BigInt::from(run.position(n, i))) - eta * integer(n as u64);
                prop_assert!(dev.abs() <= integer(timer as u64), "head {i} n={n} dev={dev}");
            }
        }
    }

    /// The embedded table machine and the factored simulation agree step for step.
    #[test]
    fn embedding_preserves_trajectory(seed in any::<u64>(), heads in 1usize..4, timer in 1usize..8) {
        let mut rng = common::rng(seed);
        let spec = common::random_oblivious(&mut rng, heads, 4, timer, Alphabet::binary());
        let table = embed_oblivious(&spec);
        let steps = 2_000;
        let mut src = SymbolSequence::raw(1, BitSource::seeded(seed ^ 1)).unwrap();
        let direct = direct_run(&spec, &mut src, steps).unwrap();
        let mut engine = Engine::new(&table, None, false);
        for n in 0..steps {
            let (p, t) = direct.states[n];
            prop_assert_eq!(engine.state().0 as usize, spec.pair_index(p, t));
            for i in 0..heads - 1 {
                prop_assert_eq!(engine.positions()[i], direct.position(n, i));
            }
            prop_assert_eq!(engine.ledger().log2(), direct.log2_capital[n]);
            engine.step(&src, &mut []).unwrap();
        }
    }

    #[test]
    fn exact_and_log_capital_agree(seed in any::<u64>(), heads in 1usize..4) {
        let mut rng = common::rng(seed);
        let g = common::random_table(&mut rng, heads, 5, Alphabet::new(2, false).unwrap(), false);
        let mut seq = SymbolSequence::raw(2, BitSource::seeded(seed)).unwrap();
        let worst = exact_crosscheck(&g, &mut seq, 1_000).unwrap();
        prop_assert!(worst <= DRIFT_TOLERANCE);
    }

    #[test]
    fn index_set_algebra_matches_btreeset(
        a in proptest::collection::vec(0u64..200, 0..60),
        b in proptest::collection::vec(0u64..200, 0..60),
        lo in 0u64..200,
        span in 0u64..100,
    ) {
        let (sa, ba) = sets_from(&a);
        let (sb, bb) = sets_from(&b);
        let collect = |s: &IndexSet| s.iter().collect::<BTreeSet<u64>>();
        prop_assert_eq!(collect(&sa.union(&sb)), ba.union(&bb).copied().collect::<BTreeSet<_>>());
        prop_assert_eq!(collect(&sa.intersection(&sb)), ba.intersection(&bb).copied().collect::<BTreeSet<_>>());
        prop_assert_eq!(collect(&sa.difference(&sb)), ba.difference(&bb).copied().collect::<BTreeSet<_>>());
        prop_assert_eq!(sa.is_disjoint(&sb), ba.is_disjoint(&bb));
        prop_assert_eq!(sa.is_subset(&sb), ba.is_subset(&bb));
        prop_assert_eq!(sa.len(), ba.len() as u64);
        let hi = lo + span;
        prop_assert_eq!(collect(&sa.clip(lo, hi)), ba.range(lo..=hi).copied().collect::<BTreeSet<_>>());
        for x in 0..200 {
            prop_assert_eq!(sa.contains(x), ba.contains(&x));
        }
        // Runs are canonical: sorted, disjoint and non-adjacent.
        for pair in sa.intervals().windows(2) {
            prop_assert!(pair[0].1 + 1 < pair[1].0);
        }
    }

    /// The XOR of the surviving leaves reproduces the root symbol.
    #[test]
    fn leaf_expansion_xor_identity(seed in any::<u64>(), h in 1u32..4, root in 1u64..6_000, depth in 0u32..6) {
        let mut f = SymbolSequence::f(h, BitSource::seeded(seed)).unwrap();
        f.ensure(root + 1).unwrap();
        let graph = DependencyGraph::new(DepFamily::F { h: h as usize });
        let leaves = leaf_expansion(&graph, root, depth).leaves;
        let xor = leaves.iter().fold(0, |acc, &i| acc ^ f.symbol(i));
        prop_assert_eq!(xor, f.symbol(root));
        prop_assert!(leaves.iter().all(|&l| l <= root));
    }

    #[test]
    fn phi_leaf_expansion_xor_identity(seed in any::<u64>(), h in 2u32..4, root in 1u64..20_000, depth in 0u32..5) {
        let mut x = SymbolSequence::phi(h, 2, BitSource::seeded(seed)).unwrap();
        x.ensure(root + 1).unwrap();
        if x.alphabet().is_dollar(x.symbol(root)) {
            return Ok(());
        }
        let graph = DependencyGraph::new(DepFamily::Phi { h: h as u64 });
        let leaves = leaf_expansion(&graph, root, depth).leaves;
        prop_assert!(leaves.iter().all(|&l| !x.alphabet().is_dollar(x.symbol(l))));
        prop_assert_eq!(leaves.iter().fold(0, |acc, &i| acc ^ x.symbol(i)), x.symbol(root));
    }

    #[test]
    fn deducible_closure_is_monotone(
        seed in any::<u64>(),
        phi in any::<bool>(),
        inversion in any::<bool>(),
        density in 0.05f64..0.95,
    ) {
        let mut rng = common::rng(seed);
        let horizon = 400;
        let (graph, alphabet) = if phi {
            (DependencyGraph::new(DepFamily::Phi { h: 2 }), Alphabet::with_dollar(1).unwrap())
        } else {
            (DependencyGraph::new(DepFamily::F { h: 2 }), Alphabet::binary())
        };
        let small: Vec<u64> = (0..=horizon).filter(|_| rng.gen_bool(density)).collect();
        let large: Vec<u64> = (0..=horizon).filter(|x| small.contains(x) || rng.gen_bool(0.3)).collect();
        let (ks, _) = sets_from(&small);
        let (kl, _) = sets_from(&large);
        let cs = deducible_closure(&graph, &alphabet, &ks, horizon, inversion);
        let cl = deducible_closure(&graph, &alphabet, &kl, horizon, inversion);
        prop_assert!(ks.is_subset(&cs));
        prop_assert!(cs.is_subset(&cl));
        if !inversion {
            let ci = deducible_closure(&graph, &alphabet, &ks, horizon, true);
            prop_assert!(cs.is_subset(&ci));
        }
    }

    /// Trailing heads of an oblivious machine stay inside `U` while the leading head spans `[m, n]`.
    #[test]
    fn oblivious_positions_inside_u(seed in any::<u64>(), heads in 2usize..5, timer in 1usize..10, m in 0usize..3_000, span in 0usize..1_000) {
        let mut rng = common::rng(seed);
        let spec = common::random_oblivious(&mut rng, heads, 2, timer, Alphabet::binary());
        let speeds = oblivious_speeds(&spec);
        let n = m + span;
        let mut src = SymbolSequence::raw(1, BitSource::seeded(seed)).unwrap();
        let run = direct_run(&spec, &mut src, n).unwrap();
        let u = u_oblivious(m as u64, n as u64, &speeds, timer as u64);
        for t in m..=n {
            for i in 0..heads - 1 {
                prop_assert!(u.contains(run.position(t, i)), "head {i} at step {t}: {} ∉ {u}", run.position(t, i));
            }
        }
    }

    #[test]
    fn adaptive_positions_inside_u(seed in any::<u64>(), heads in 2usize..5, m in 1u64..1_500, span in 0u64..500) {
        let mut rng = common::rng(seed);
        let g = common::random_table(&mut rng, heads, 6, Alphabet::binary(), false);
        let n = m + span;
        let mut seq = SymbolSequence::raw(1, BitSource::seeded(seed)).unwrap();
        seq.ensure(n + 2).unwrap();
        let mut log = PositionLog::new(heads - 1);
        let mut engine = Engine::new(&g, None, false);
        while engine.n() <= n {
            let mut obs: [&mut dyn StepObserver; 1] = [&mut log];
            engine.step(&seq, &mut obs).unwrap();
        }
        let u = u_adaptive(m, n, &log).unwrap();
        for t in m - 1..=n {
            for &p in log.at(t).unwrap() {
                if p < m {
                    prop_assert!(u.contains(p), "{p} read at step {t} outside {u}");
                }
            }
        }
    }

    #[test]
    fn overwritten_set_avoids_reference_window(h in 2u64..5, n in 1u64..200_000, frac in 0.0f64..1.0, j_pick in 0u64..8) {
        let m = (n as f64 * frac) as u64;
        let j = 1 + j_pick % h;
        let a = overwritten_set_a(h, n);
        for k in 0..6 {
            if phi_boundaries(h, k).is_err() {
                break;
            }
            let sets = phi_ref_set(h, m, n, k, j).unwrap();
            prop_assert!(a.is_disjoint(&sets.v), "h={h} k={k} j={j}");
            prop_assert_eq!(sets.v.union(&sets.w).clip(0, m), IndexSet::interval(0, m));
            prop_assert!(sets.v.is_disjoint(&sets.w));
        }
    }

    /// Each member of `V_i` is the end of the path that always takes parent `i`.
    #[test]
    fn hier_leaf_set_follows_parent_paths(h in 1usize..4, d in 0u32..4, m in 1u64..5_000, span in 0u64..300, i_pick in 0usize..4) {
        let i = 1 + i_pick % h;
        let n = m + span;
        let graph = DependencyGraph::new(DepFamily::F { h });
        let expected: BTreeSet<u64> = (m..=n)
            .map(|k| {
                let mut x = k;
                for _ in 0..d {
                    let parents = graph.parents(x);
                    if parents.is_empty() {
                        break;
                    }
                    x = parents[i - 1];
                }
                x
            })
            .collect();
        let got: BTreeSet<u64> = hier_leaf_set(h, d, m, n, i).unwrap().iter().collect();
        prop_assert_eq!(got, expected);
    }
}

/// Bets and moves depend only on the symbols the heads actually read.
#[test]
fn runs_replay_on_read_indices_only() {
    for seed in 0..20u64 {
        let mut rng = common::rng(seed);
        let alphabet = Alphabet::new(1, false).unwrap();
        let g: TableSpec = common::random_table(&mut rng, 3, 5, alphabet, false);
        let steps = 3_000u64;
        let mut seq = SymbolSequence::raw(1, BitSource::seeded(seed)).unwrap();
        seq.ensure(steps).unwrap();
        let mut reads = ReadLog::new();
        let mut engine = Engine::new(&g, None, false);
        while engine.n() < steps {
            let mut obs: [&mut dyn StepObserver; 1] = [&mut reads];
            engine.step(&seq, &mut obs).unwrap();
        }
        let read: BTreeSet<u64> = reads.indices().into_iter().collect();
        // Every index never read is flipped.
        let altered: Vec<Symbol> = (0..steps)
            .map(|i| {
                if read.contains(&i) {
                    seq.symbol(i)
                } else {
                    1 - seq.symbol(i)
                }
            })
            .collect();
        let other = SymbolSequence::from_symbols(alphabet, &altered).unwrap();
        let mut replay = Engine::new(&g, None, false);
        while replay.n() < steps {
            replay.step(&other, &mut []).unwrap();
        }
        assert_eq!(replay.state(), engine.state());
        assert_eq!(replay.positions(), engine.positions());
        assert_eq!(replay.ledger().log2(), engine.ledger().log2());
    }
}

/// The odd-interval density closes in on both closed forms as `k` grows.
#[test]
fn beta_errors_shrink_with_k() {
    for h in [2u64, 3] {
        let scale = integer(h + 1);
        let mut last: Option<(Rational, Rational)> = None;
        for k in 1..=4u32 {
            let Ok((_, t)) = phi_boundaries(h, 2 * k + 1) else {
                break;
            };
            let Ok((s, _)) = phi_boundaries(h, 2 * k + 3) else {
                break;
            };
            let upper = (beta(h, t) / &scale - delta1(h)).abs();
            let lower = (beta(h, s) / &scale - delta2(h)).abs();
            if let Some((pu, pl)) = &last {
                assert!(upper < *pu, "h={h} k={k}");
                assert!(lower < *pl, "h={h} k={k}");
            }
            last = Some((upper, lower));
        }
    }
}
