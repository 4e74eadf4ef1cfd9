//! Answer sets of the translation against brute-force temporal answer sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tasp::ground::translate;
use tasp::oracle::{
    crosscheck_theorem1, enumerate_temporal_answer_sets, random_domain, satisfies_rules, solver_candidates, DomainShape,
};
use tasp::solver::{solve, SolveConfig};
use tasp::syntax::{expand_with, parse_domain, DomainDescription, ExpandOptions};

fn tiny_domains(seed: u64, n: usize) -> Vec<(DomainDescription, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let shape = DomainShape {
                fluents: rng.gen_range(1..=3),
                actions: rng.gen_range(1..=3),
                laws: rng.gen_range(0..=5),
                all_inertial: true,
            };
            let d = expand_with(&random_domain(&mut rng, shape), ExpandOptions::default());
            (d, rng.gen_range(0..=2))
        })
        .collect()
}

#[test]
fn translation_matches_oracle_on_random_domains() {
    let mut failures = Vec::new();
    let mut inhabited = 0;
    for (i, (d, k)) in tiny_domains(1, 120).iter().enumerate() {
        let report = crosscheck_theorem1(d, *k).unwrap();
        inhabited += usize::from(!report.oracle.is_empty());
        if !report.is_ok() {
            failures.push(format!("domain {i}, k = {k}:\n{d}\n{report}"));
        }
    }
    assert!(failures.is_empty(), "{} mismatches\n{}", failures.len(), failures.join("\n"));
    assert!(inhabited >= 60, "only {inhabited} domains have answer sets");
}

#[test]
fn inertial_answer_sets_are_total() {
    for (d, k) in tiny_domains(2, 60) {
        for c in enumerate_temporal_answer_sets(&d, k).unwrap() {
            assert!(c.is_total(), "{d}\n{c}");
            assert!(satisfies_rules(&d, &c), "{d}\n{c}");
        }
        let mut g = translate(&d, k);
        g.attach_probe().unwrap();
        assert!(solve(&g, &SolveConfig::default()).unwrap().models.is_empty(), "{d}");
    }
}

#[test]
fn completion_only_counts() {
    // Two fluents, two actions, no other laws. The translation only asks
    // that state k+1 not contradict the loop target, which an empty state
    // never does; the oracle asks for equality, which fails for j = 0.
    let d = expand_with(&parse_domain("fluent f. fluent g. action a. action b.").unwrap(), ExpandOptions::default());
    for k in 0..=2u32 {
        let skeletons = 4 * 2usize.pow(k + 1);
        let (solver, answer_sets) = solver_candidates(&d, k).unwrap();
        assert_eq!(answer_sets, skeletons * (k as usize + 1));
        assert_eq!(solver.len(), answer_sets);
        assert_eq!(enumerate_temporal_answer_sets(&d, k).unwrap().len(), skeletons * k as usize);
    }
}
