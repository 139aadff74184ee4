//! Grammar-level properties over random grammars.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regtypes::harness::{gen_grammar, gen_instance, random_ground, GenConfig};
use regtypes::*;

/// A random unsimplified grammar: chain rules, empty and unreachable
/// symbols allowed.
fn raw_grammar() -> impl Strategy<Value = Grammar> {
    let rhs = prop_oneof![
        (0usize..4).prop_map(|i| format!("T{i}")),
        Just("a".to_string()),
        Just("b".to_string()),
        (0usize..4).prop_map(|i| format!("s(T{i})")),
        ((0usize..4), (0usize..4)).prop_map(|(i, j)| format!("p(T{i},T{j})")),
        (0usize..4).prop_map(|i| format!("p(a,s(T{i}))")),
    ];
    let own = proptest::collection::vec(rhs.clone(), 4);
    let extra = proptest::collection::vec(((0usize..4), rhs), 0..8);
    (own, extra).prop_map(|(own, extra)| {
        let mut text = String::from("%sig a/0 b/0 s/1 p/2\n");
        for (lhs, rhs) in own.into_iter().enumerate().chain(extra) {
            text.push_str(&format!("T{lhs} -> {rhs}\n"));
        }
        parse_grammar(&text).unwrap()
    })
}

fn probes(g: &Grammar, seed: u64) -> Vec<GroundTerm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..40).map(|_| random_ground(g, 4, &mut rng)).collect()
}

/// Membership straight from the rules, chain rules included.
fn derives(g: &Grammar, t: &GroundTerm, tau: &PureTerm, seen: &mut BTreeSet<Symbol>) -> bool {
    match tau {
        PureTerm::App(f, args) => {
            f == t.head()
                && args.len() == t.args().len()
                && t.args()
                    .iter()
                    .zip(args.iter())
                    .all(|(ti, ai)| derives(g, ti, ai, &mut BTreeSet::new()))
        }
        PureTerm::Type(alpha) => {
            if !seen.insert(alpha.clone()) {
                return false;
            }
            let rules: Vec<PureTerm> = g.rules_for(alpha).iter().cloned().collect();
            let found = rules.iter().any(|r| derives(g, t, r, seen));
            seen.remove(alpha);
            found
        }
    }
}

proptest! {
    #[test]
    fn simplify_is_idempotent(g in raw_grammar()) {
        let s = g.simplify(&[]).unwrap();
        prop_assert!(s.is_simplified());
        prop_assert_eq!(s.simplify(&[]).unwrap(), s.clone());
        prop_assert!(s.rules().all(|(_, r)| !r.is_type_symbol()));
        prop_assert_eq!(s.nonempty_symbols().len(), s.type_symbol_count());
    }

    #[test]
    fn simplify_preserves_languages(g in raw_grammar(), seed in any::<u64>()) {
        let s = g.simplify(&[]).unwrap();
        for alpha in s.pi() {
            let tau = PureTerm::Type(alpha.clone());
            for t in probes(&s, seed) {
                prop_assert_eq!(member(&s, &t, &tau), derives(&g, &t, &tau, &mut BTreeSet::new()), "{} in {}", t, alpha);
            }
        }
        for alpha in g.pi().filter(|a| !s.is_type_symbol(a.as_str())) {
            prop_assert!(g.simplify(&[alpha.as_str()]).is_err());
        }
    }

    #[test]
    fn render_round_trips(g in raw_grammar()) {
        let text = g.render();
        let back = parse_grammar(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.render(), text);
    }

    #[test]
    fn generated_grammars_round_trip(seed in any::<u64>()) {
        let g = gen_grammar(&GenConfig::default().with_seed(seed));
        prop_assert_eq!(parse_grammar(&g.render()).unwrap().simplify(&[]).unwrap(), g);
    }

    #[test]
    fn inclusion_is_reflexive(seed in any::<u64>()) {
        let inst = gen_instance(&GenConfig::default().with_seed(seed));
        prop_assume!(inst.grammar.rule_count() <= 12);
        prop_assert_eq!(td_subset(&inst.grammar, &inst.tau1, &inst.tau1), Ok(true));
        prop_assert_eq!(dz_subset(&inst.grammar, &inst.tau1, &inst.tau1), Ok(true));
    }
}

#[test]
fn td_inclusion_is_transitive_on_a_sample() {
    let mut triples = 0;
    for seed in 0..300 {
        let g = gen_grammar(&GenConfig::default().with_seed(seed));
        let types: Vec<PureTerm> = g.pi().map(|s| PureTerm::Type(s.clone())).collect();
        for a in &types {
            for b in &types {
                if td_subset(&g, a, b) != Ok(true) {
                    continue;
                }
                for c in &types {
                    if td_subset(&g, b, c) == Ok(true) {
                        triples += 1;
                        assert_eq!(td_subset(&g, a, c), Ok(true), "seed {seed}: {a} {b} {c}");
                    }
                }
            }
        }
    }
    assert!(triples > 100, "{triples}");
}
