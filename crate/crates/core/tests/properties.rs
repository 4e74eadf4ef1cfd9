//! Invariants over randomly generated inputs. Each case draws a seed and
//! builds its input with the oracle's generators.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tasp::automata::{accepts, compile, language_upto};
use tasp::ground::{translate, Mode};
use tasp::oracle::{
    all_words, brute_force_answer_sets, enumerate_temporal_answer_sets, fixed_trace_program, in_language,
    random_domain, random_formula, random_ground_program, random_program, random_trace, DomainShape,
};
use tasp::solver::{is_answer_set, solve, solve_rules, SolveConfig};
use tasp::syntax::{expand_with, parse_formula, ExpandOptions};
use tasp::trace::{self, decode, eval_unfolded, parse_structured, render_structured};

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solver_agrees_with_enumeration(seed in any::<u64>(), n in 1usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let count = rng.gen_range(1..=2 * n);
        let rules = random_ground_program(&mut rng, n, count);
        let mut expected = brute_force_answer_sets(n, &rules);
        expected.sort();
        let out = solve_rules(n, &rules, &[], &SolveConfig { seed, ..SolveConfig::all() }).unwrap();
        let mut got: Vec<BTreeSet<u32>> = out.models.iter().map(|m| m.atoms().collect()).collect();
        got.sort();
        prop_assert_eq!(&got, &expected);
        for m in &out.models {
            prop_assert!(is_answer_set(n, &rules, m));
        }
    }

    #[test]
    fn first_model_is_an_answer_set(seed in any::<u64>(), n in 1usize..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let count = rng.gen_range(1..=2 * n);
        let rules = random_ground_program(&mut rng, n, count);
        let all = brute_force_answer_sets(n, &rules);
        let out = solve_rules(n, &rules, &[], &SolveConfig::default()).unwrap();
        prop_assert_eq!(out.models.len(), usize::from(!all.is_empty()));
        if let Some(m) = out.models.first() {
            prop_assert!(all.contains(&m.atoms().collect()));
        }
    }

    #[test]
    fn automaton_accepts_the_denotation(seed in any::<u64>(), size in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let symbols = names("a", rng.gen_range(1..=3));
        let p = random_program(&mut rng, &symbols, size);
        let h = compile(&p);
        let words = all_words(&symbols, 5);
        let brute: BTreeSet<Vec<String>> = words.iter().filter(|w| in_language(&p, w)).cloned().collect();
        for w in &words {
            prop_assert_eq!(accepts(&h, w), brute.contains(w), "{} on {:?}", p, w);
        }
        prop_assert_eq!(language_upto(&h, 5).unwrap(), brute);
    }

    #[test]
    fn negation_flips_the_value(seed in any::<u64>(), size in 1usize..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (fluents, actions) = (names("f", 2), names("a", 2));
        let k = rng.gen_range(0..=3);
        let t = random_trace(&mut rng, &fluents, &actions, k);
        let f = random_formula(&mut rng, &fluents, &actions, size);
        let v = trace::eval(&t, &f).unwrap().value;
        prop_assert_eq!(trace::eval(&t, &f.negate()).unwrap().value, !v);
        let core = f.to_core(&actions);
        prop_assert!(core.is_core());
        prop_assert_eq!(trace::eval(&t, &core).unwrap().value, v);
    }

    #[test]
    fn unfolding_agrees_where_it_settles(seed in any::<u64>(), size in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (fluents, actions) = (names("f", 2), names("a", 2));
        let k = rng.gen_range(0..=3);
        let t = random_trace(&mut rng, &fluents, &actions, k);
        let f = random_formula(&mut rng, &fluents, &actions, size);
        let v = trace::eval(&t, &f).unwrap().value;
        if let Some(u) = eval_unfolded(&t, &f, 64) {
            prop_assert_eq!(u, v, "{}", f);
        }
    }

    #[test]
    fn formulas_print_and_parse_back(seed in any::<u64>(), size in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (fluents, actions) = (names("f", 3), names("a", 3));
        let f = random_formula(&mut rng, &fluents, &actions, size);
        let t = random_trace(&mut rng, &fluents, &actions, 2);
        let g = parse_formula(&f.to_string(), &t.signature()).unwrap();
        prop_assert_eq!(trace::eval(&t, &g).unwrap(), trace::eval(&t, &f).unwrap());
        prop_assert_eq!(g.to_string(), f.to_string());
    }

    #[test]
    fn structured_traces_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(0..=4);
        let t = random_trace(&mut rng, &names("f", 3), &names("a", 3), k);
        prop_assert_eq!(parse_structured(&render_structured(&t)).unwrap(), t);
    }

    #[test]
    fn sat_rules_follow_evaluation(seed in any::<u64>(), size in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (fluents, actions) = (names("f", 2), names("a", 3));
        let k = rng.gen_range(0..=3);
        let t = random_trace(&mut rng, &fluents, &actions, k);
        let f = random_formula(&mut rng, &fluents, &actions, size);
        let v = trace::eval(&t, &f).unwrap().value;
        for (mode, expect) in [(Mode::Require, v), (Mode::Forbid, !v)] {
            let mut g = fixed_trace_program(&t);
            g.attach_formula(&f, mode).unwrap();
            prop_assert_eq!(!solve(&g, &SolveConfig::default()).unwrap().models.is_empty(), expect, "{}", f);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Requiring a formula keeps exactly the temporal models where it holds.
    #[test]
    fn required_formula_selects_its_models(seed in any::<u64>(), size in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = DomainShape { fluents: 2, actions: 2, laws: rng.gen_range(0..=4), all_inertial: true };
        let d = expand_with(&random_domain(&mut rng, shape), ExpandOptions::default());
        let k = rng.gen_range(0..=2);
        let f = random_formula(&mut rng, &d.fluents, &d.actions, size);
        let expected: BTreeSet<_> = enumerate_temporal_answer_sets(&d, k)
            .unwrap()
            .into_iter()
            .map(|c| c.to_trace(&d.fluents, &d.actions).unwrap())
            .filter(|t| trace::eval(t, &f).unwrap().value)
            .map(|t| (t.actions, t.loop_to, t.valuation))
            .collect();
        let mut g = translate(&d, k);
        g.attach_formula(&f, Mode::Require).unwrap();
        let got: BTreeSet<_> = solve(&g, &SolveConfig::all())
            .unwrap()
            .models
            .iter()
            .map(|m| decode(&g, m).unwrap())
            .map(|t| (t.actions, t.loop_to, t.valuation))
            .collect();
        prop_assert_eq!(got, expected, "{}", f);
    }
}
