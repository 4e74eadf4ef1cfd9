//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p tasp --test acceptance -- --nocapture` to see the
//! lines. Time limits are wall-clock and include grounding.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tasp::automata::{accepts, compile};
use tasp::bmc::{self, Outcome, Query, Task};
use tasp::ground::{diff, translate, Mode};
use tasp::oracle::{
    all_words, brute_force_answer_sets, crosscheck_theorem1, enumerate_temporal_answer_sets, fixed_trace_program,
    in_language, random_domain, random_formula, random_ground_program, random_program, random_trace, DomainShape,
};
use tasp::philosophers;
use tasp::solver::{solve, solve_rules, SolveConfig};
use tasp::syntax::{expand_with, parse_domain, parse_formula, DomainDescription, ExpandOptions};
use tasp::trace::{self, decode, LassoTrace};

const MAIL: &str = include_str!("fixtures/mail.dom");
const YALE: &str = include_str!("fixtures/yale.dom");
const INJECTION: &str = include_str!("fixtures/injection.dom");
const MAIL_REFERENCE: &str = include_str!("fixtures/mail_reference.lp");

const MAIL_LIMIT: Duration = Duration::from_secs(5);
const YALE_LIMIT: Duration = Duration::from_secs(10);
const INJECTION_LIMIT: Duration = Duration::from_secs(120);
const DP6_LIMIT: Duration = Duration::from_secs(60);
const DP8_LIMIT: Duration = Duration::from_secs(30 * 60);
const TRANSLATION_LIMIT: Duration = Duration::from_secs(600);

const TRANSLATION_DOMAINS: usize = 100;
const EVAL_PAIRS: usize = 200;
const EVAL_FORMULA_SIZE: usize = 6;
const AUTOMATA_PROGRAMS: usize = 300;
const AUTOMATA_PROGRAM_SIZE: usize = 8;
const AUTOMATA_WORD_LEN: usize = 6;
const SOLVER_PROGRAMS: usize = 200;
const SOLVER_MAX_ATOMS: usize = 18;

type Check = Result<String, String>;
type Criterion = (&'static str, Box<dyn FnOnce() -> Check>);

fn timed(limit: Duration, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    if took > limit {
        return Err(format!("{detail}; took {took:.2?}, limit {limit:?}"));
    }
    Ok(format!("{detail}; {took:.2?}"))
}

fn domain(src: &str) -> DomainDescription {
    parse_domain(src).expect("fixture parses")
}

fn mail_counterexample() -> Check {
    let d = domain(MAIL);
    let f = parse_formula("G (mail(b) -> F ~mail(b))", &d).map_err(|e| e.to_string())?;
    let short = bmc::run(&d, &Query::new(Task::Validity(f.clone()), 2)).map_err(|e| e.to_string())?;
    if short != Outcome::ValidUpTo(2) {
        return Err(format!("expected no counterexample up to k = 2, got {short:?}"));
    }
    let mut q = Query::new(Task::Validity(f), 6);
    q.k_min = 0;
    match bmc::run(&d, &q).map_err(|e| e.to_string())? {
        Outcome::Counterexample { trace, k: 3 } => {
            let want = ["begin", "sense_mail(a)", "sense_mail(b)", "deliver(a)"];
            if trace.actions != want || trace.loop_to != 0 {
                return Err(format!("unexpected trace {:?} loop {}", trace.actions, trace.loop_to));
            }
            if (0..=4).any(|s| trace.holds(trace.position(s), "mail(b)") != Some(true)) {
                return Err("mail(b) is not true throughout".into());
            }
            Ok("counterexample at k = 3, begin; sense_mail(a); sense_mail(b); deliver(a), loop to 0".into())
        }
        other => Err(format!("expected a counterexample at k = 3, got {other:?}")),
    }
}

fn yale_projection() -> Check {
    let d = domain(YALE);
    let sig = expand_with(&d, ExpandOptions { completion: true, dummy: true });
    let f = parse_formula("<-in_sight?; wait; in_sight?; load; shoot> ~alive", &sig).map_err(|e| e.to_string())?;
    let Outcome::Witness { trace, k } =
        bmc::run(&d, &Query::new(Task::Satisfy(f), 8).with_dummy()).map_err(|e| e.to_string())?
    else {
        return Err("no witness".into());
    };
    // alive, in_sight, frightened, loaded after each prefix.
    let expected = [
        [true, false, false, false],
        [true, false, false, false],
        [true, true, true, false],
        [true, true, true, false],
        [true, true, true, true],
        [false, true, true, true],
        [false, true, true, true],
    ];
    for (s, row) in expected.iter().enumerate() {
        let got: Vec<bool> = ["alive", "in_sight", "frightened", "loaded"]
            .iter()
            .map(|f| trace.holds(trace.position(s), f) == Some(true))
            .collect();
        if got != row {
            return Err(format!("state {s}: expected {row:?}, got {got:?} (k = {k})"));
        }
    }
    Ok(format!("witness at k = {k}, seven states as listed"))
}

fn injection_validity() -> Check {
    let d = domain(INJECTION);
    let f = parse_formula("G (p_low -> X X X p_ok)", &d).map_err(|e| e.to_string())?;
    match bmc::run(&d, &Query::new(Task::Validity(f), 12)).map_err(|e| e.to_string())? {
        Outcome::ValidUpTo(12) => Ok("valid up to 12".into()),
        other => Err(format!("{other:?}")),
    }
}

fn philosophers_at(n: usize, expect: u32) -> Check {
    let (dom, fml) = philosophers::generate(n);
    let d = domain(&dom);
    let f = parse_formula(&fml, &d).map_err(|e| e.to_string())?;
    match bmc::run(&d, &Query::new(Task::Validity(f), expect + 2)).map_err(|e| e.to_string())? {
        Outcome::Counterexample { k, .. } if k == expect => Ok(format!("DP({n}) counterexample at k = {k}")),
        other => Err(format!("DP({n}): expected a counterexample at k = {expect}, got {other:?}")),
    }
}

fn tiny_domains() -> Vec<(DomainDescription, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e51);
    (0..TRANSLATION_DOMAINS)
        .map(|_| {
            let shape = DomainShape {
                fluents: rng.gen_range(1..=3),
                actions: rng.gen_range(1..=3),
                laws: rng.gen_range(0..=6),
                all_inertial: true,
            };
            (expand_with(&random_domain(&mut rng, shape), ExpandOptions::default()), rng.gen_range(0..=2))
        })
        .collect()
}

fn translation_vs_oracle() -> Check {
    let mut mismatches = Vec::new();
    let mut models = 0;
    for (i, (d, k)) in tiny_domains().iter().enumerate() {
        let r = crosscheck_theorem1(d, *k).map_err(|e| e.to_string())?;
        models += r.oracle.len();
        if !r.is_ok() {
            mismatches.push(format!("domain {i} (k = {k}): {r}"));
        }
    }
    if mismatches.is_empty() {
        Ok(format!("{TRANSLATION_DOMAINS} domains, {models} temporal answer sets, zero mismatches"))
    } else {
        Err(format!("{} mismatches; first: {}", mismatches.len(), mismatches[0]))
    }
}

fn eval_vs_sat_rules() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e52);
    let cfg = SolveConfig::default();
    let mut trues = 0;
    for i in 0..EVAL_PAIRS {
        let fluents: Vec<String> = (1..=rng.gen_range(1..=3)).map(|i| format!("f{i}")).collect();
        let actions: Vec<String> = (1..=rng.gen_range(1..=3)).map(|i| format!("a{i}")).collect();
        let k = rng.gen_range(0..=3);
        let t: LassoTrace = random_trace(&mut rng, &fluents, &actions, k);
        let size = rng.gen_range(1..=EVAL_FORMULA_SIZE);
        let f = random_formula(&mut rng, &fluents, &actions, size);
        let value = trace::eval(&t, &f).map_err(|e| e.to_string())?.value;
        trues += usize::from(value);
        for (mode, expect) in [(Mode::Require, value), (Mode::Forbid, !value)] {
            let mut g = fixed_trace_program(&t);
            g.attach_formula(&f, mode).map_err(|e| e.to_string())?;
            let sat = !solve(&g, &cfg).map_err(|e| e.to_string())?.models.is_empty();
            if sat != expect {
                return Err(format!(
                    "pair {i}: {f} is {value} on the trace but {mode:?} is {}",
                    if sat { "satisfiable" } else { "unsatisfiable" }
                ));
            }
        }
    }
    Ok(format!("{EVAL_PAIRS} pairs ({trues} true), require and forbid agree"))
}

fn totality() -> Check {
    let mut checked = 0;
    for (i, (d, k)) in tiny_domains().iter().enumerate() {
        for c in enumerate_temporal_answer_sets(d, *k).map_err(|e| e.to_string())? {
            if !c.is_total() {
                return Err(format!("domain {i}: oracle answer set {c} is partial"));
            }
            checked += 1;
        }
        let g = translate(d, *k);
        for m in solve(&g, &SolveConfig::all()).map_err(|e| e.to_string())?.models {
            decode(&g, &m).map_err(|e| format!("domain {i}: {e}"))?;
            checked += 1;
        }
        let mut g = translate(d, *k);
        g.attach_probe().map_err(|e| e.to_string())?;
        if !solve(&g, &SolveConfig::default()).map_err(|e| e.to_string())?.models.is_empty() {
            return Err(format!("domain {i}: the undefined-fluent probe is satisfiable"));
        }
    }
    Ok(format!("{checked} answer sets total, probe unsatisfiable on all {TRANSLATION_DOMAINS} domains"))
}

fn automata_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e53);
    let mut accepted = 0;
    for i in 0..AUTOMATA_PROGRAMS {
        let symbols: Vec<String> = ["a", "b", "c"][..rng.gen_range(1..=3)].iter().map(|s| s.to_string()).collect();
        let size = rng.gen_range(1..=AUTOMATA_PROGRAM_SIZE);
        let p = random_program(&mut rng, &symbols, size);
        let h = compile(&p);
        for w in all_words(&symbols, AUTOMATA_WORD_LEN) {
            let (nfa, brute) = (accepts(&h, &w), in_language(&p, &w));
            if nfa != brute {
                return Err(format!("program {i} `{p}` on {w:?}: automaton {nfa}, denotation {brute}"));
            }
            accepted += usize::from(nfa);
        }
    }
    Ok(format!("{AUTOMATA_PROGRAMS} programs, words up to length {AUTOMATA_WORD_LEN}, {accepted} accepted"))
}

fn solver_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e54);
    let mut total = 0;
    for i in 0..SOLVER_PROGRAMS {
        let n = rng.gen_range(1..=SOLVER_MAX_ATOMS);
        let count = rng.gen_range(n / 2..=2 * n);
        let rules = random_ground_program(&mut rng, n, count);
        let mut expected = brute_force_answer_sets(n, &rules);
        let out = solve_rules(n, &rules, &[], &SolveConfig::all()).map_err(|e| e.to_string())?;
        let mut got: Vec<BTreeSet<u32>> = out.models.iter().map(|m| m.atoms().collect()).collect();
        expected.sort();
        got.sort();
        if got != expected {
            return Err(format!("program {i} ({n} atoms): solver {got:?}, enumeration {expected:?}"));
        }
        total += got.len();
    }
    Ok(format!("{SOLVER_PROGRAMS} programs, {total} answer sets, identical"))
}

fn reference_listing() -> Check {
    let d = expand_with(&domain(MAIL), ExpandOptions::default());
    let mut g = translate(&d, 3);
    g.attach_constraints(&d).map_err(|e| e.to_string())?;
    let f = parse_formula("F ~(mail(b) -> F ~mail(b))", &d).map_err(|e| e.to_string())?;
    g.attach_formula(&f, Mode::Require).map_err(|e| e.to_string())?;
    let diff = diff::diff_texts(&g.export_text(), MAIL_REFERENCE, &[]).map_err(|e| e.to_string())?;
    if diff.is_equal() {
        Ok(format!("{} rules compared, no differences", diff.compared))
    } else {
        Err(diff.to_string())
    }
}

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        ("mail-delivery counterexample at k = 3", Box::new(|| timed(MAIL_LIMIT, mail_counterexample))),
        ("Yale shooting projection", Box::new(|| timed(YALE_LIMIT, yale_projection))),
        ("injection system valid up to 12", Box::new(|| timed(INJECTION_LIMIT, injection_validity))),
        (
            "dining philosophers DP(6) at 8, DP(8) at 10",
            Box::new(|| {
                let six = timed(DP6_LIMIT, || philosophers_at(6, 8))?;
                let eight = timed(DP8_LIMIT, || philosophers_at(8, 10))?;
                Ok(format!("{six}; {eight}"))
            }),
        ),
        ("translation against temporal answer sets", Box::new(|| timed(TRANSLATION_LIMIT, translation_vs_oracle))),
        ("formula evaluation against sat rules", Box::new(eval_vs_sat_rules)),
        ("inertial domains have total answer sets", Box::new(totality)),
        ("automata against denotation", Box::new(automata_oracle)),
        ("solver against enumeration", Box::new(solver_oracle)),
        ("reference DLV listing of the mail domain", Box::new(reference_listing)),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
