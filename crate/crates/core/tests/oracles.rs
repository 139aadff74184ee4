//! The bounded oracles against brute force over small random grammars.

use std::collections::BTreeSet;

use proptest::prelude::*;
use regtypes::harness::{gen_instance, GenConfig};
use regtypes::semantics::Enumerator;
use regtypes::*;

fn small() -> GenConfig {
    GenConfig {
        max_type_symbols: 3,
        max_function_symbols: 4,
        max_arity: 2,
        ..GenConfig::default()
    }
}

fn brute(
    g: &Grammar,
    tau1: &PureTerm,
    tau2: &PureTerm,
    depth: usize,
    td: bool,
) -> Option<GroundTerm> {
    let upsilon = BTreeSet::from([tau2.clone()]);
    enumerate(g, tau1, depth).into_iter().find(|t| {
        if td {
            !member_td(g, t, &upsilon)
        } else {
            !member(g, t, tau2)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn least_witness_matches_enumeration(seed in any::<u64>(), depth in 1usize..=4) {
        let inst = gen_instance(&small().with_seed(seed));
        let (g, t1, t2) = (&inst.grammar, &inst.tau1, &inst.tau2);
        let sizes = Enumerator::with_limit(g, 20_000).enumerate(t1, depth);
        prop_assume!(sizes.is_ok());
        let regular = find_regular_counterexample(g, t1, t2, depth);
        prop_assert_eq!(regular.witness().cloned(), brute(g, t1, t2, depth, false));
        let closure = find_td_counterexample(g, t1, t2, depth);
        prop_assert_eq!(closure.witness().cloned(), brute(g, t1, t2, depth, true));
    }

    #[test]
    fn member_agrees_with_enumeration(seed in any::<u64>(), depth in 1usize..=4) {
        let inst = gen_instance(&small().with_seed(seed));
        let g = &inst.grammar;
        let Ok(all) = Enumerator::with_limit(g, 20_000).enumerate(&inst.tau1, depth) else {
            return Ok(());
        };
        for t in all.iter() {
            prop_assert!(member(g, t, &inst.tau1));
            prop_assert!(member_td(g, t, &BTreeSet::from([inst.tau1.clone()])));
            if member(g, t, &inst.tau2) {
                let Ok(other) = Enumerator::with_limit(g, 20_000).enumerate(&inst.tau2, t.depth()) else {
                    continue;
                };
                prop_assert!(other.contains(t));
            }
        }
    }
}

#[test]
fn witnesses_on_the_corpus() {
    let g = corpus::left_skewed();
    let (alpha, beta) = (PureTerm::ty("alpha"), PureTerm::ty("beta"));
    for depth in 1..=5 {
        assert_eq!(
            find_regular_counterexample(&g, &alpha, &beta, depth)
                .witness()
                .cloned(),
            brute(&g, &alpha, &beta, depth, false)
        );
        assert_eq!(
            find_td_counterexample(&g, &alpha, &beta, depth)
                .witness()
                .cloned(),
            brute(&g, &alpha, &beta, depth, true)
        );
    }
    let nat = corpus::nat_lists();
    for (a, b) in [("Nat", "Natlist"), ("Natlist", "Nat"), ("Nat", "Nat")] {
        let (a, b) = (PureTerm::ty(a), PureTerm::ty(b));
        assert_eq!(
            find_regular_counterexample(&nat, &a, &b, 5)
                .witness()
                .cloned(),
            brute(&nat, &a, &b, 5, false)
        );
    }
}

#[test]
fn seed_sweep_finds_and_matches_witnesses() {
    let mut found = (0, 0);
    for seed in 0..200 {
        let inst = gen_instance(&small().with_seed(seed));
        let (g, t1, t2) = (&inst.grammar, &inst.tau1, &inst.tau2);
        if Enumerator::with_limit(g, 20_000).enumerate(t1, 4).is_err() {
            continue;
        }
        let regular = find_regular_counterexample(g, t1, t2, 4).witness().cloned();
        let closure = find_td_counterexample(g, t1, t2, 4).witness().cloned();
        assert_eq!(regular, brute(g, t1, t2, 4, false), "seed {seed}");
        assert_eq!(closure, brute(g, t1, t2, 4, true), "seed {seed}");
        found.0 += regular.is_some() as usize;
        found.1 += closure.is_some() as usize;
    }
    assert!(found.0 >= 40 && found.1 >= 40, "{found:?}");
}
