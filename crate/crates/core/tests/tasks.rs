use tasp::bmc::{self, all_extensions, transitions, Outcome, Query, Task};
use tasp::solver::SolveConfig;
use tasp::syntax::{
    expand_with, parse_domain, parse_formula, parse_program, DomainDescription, ExpandOptions, Formula,
};
use tasp::trace;

const MAIL: &str = include_str!("fixtures/mail.dom");
const YALE: &str = include_str!("fixtures/yale.dom");
const INJECTION: &str = include_str!("fixtures/injection.dom");

fn dummy_signature(d: &DomainDescription) -> DomainDescription {
    expand_with(d, ExpandOptions { completion: true, dummy: true })
}

#[test]
fn projection_through_a_loop() {
    let d = parse_domain(YALE).unwrap();
    let sig = dummy_signature(&d);
    let p = parse_program("(-in_sight?; wait)*; in_sight?; load; shoot", &sig).unwrap();
    let goal = parse_formula("~alive", &sig).unwrap();
    let q = Query::new(Task::Projection(p.clone(), goal.clone()), 8).with_dummy();
    let Outcome::Witness { trace, k } = bmc::run(&d, &q).unwrap() else { panic!("no witness") };
    assert!(trace::eval(&trace, &Formula::diamond(p, goal)).unwrap().value);
    assert!(trace.actions.contains(&"shoot".to_string()), "{k}");
}

#[test]
fn shooting_unloaded_never_kills() {
    let d = parse_domain(YALE).unwrap();
    let sig = dummy_signature(&d);
    let f = parse_formula("<wait; shoot> ~alive", &sig).unwrap();
    let q = Query::new(Task::Satisfy(f), 5).with_dummy();
    assert_eq!(bmc::run(&d, &q).unwrap(), Outcome::NoWitnessUpTo(5));
}

#[test]
fn diagnosis_orders_observations() {
    let d = parse_domain(INJECTION).unwrap();
    let fault = parse_formula("p_obs_low", &d).unwrap();
    let obs = vec![parse_formula("comp_mode", &d).unwrap()];
    let q = Query::new(Task::Diagnosis { fault: fault.clone(), observations: obs.clone() }, 8);
    let Outcome::Witness { trace, .. } = bmc::run(&d, &q).unwrap() else { panic!("no diagnosis") };
    assert!(trace.actions.contains(&"pump_weak_fault".to_string()));
    // The other order is impossible: compensation needs the low reading.
    let q = Query::new(Task::Diagnosis { fault: obs[0].clone(), observations: vec![fault] }, 8);
    assert_eq!(bmc::run(&d, &q).unwrap(), Outcome::NoWitnessUpTo(8));
}

#[test]
fn witnesses_satisfy_constraints_and_rediscovery_is_stable() {
    let d = parse_domain(MAIL).unwrap();
    let f = parse_formula("F ~(mail(b) -> F ~mail(b))", &d).unwrap();
    let Outcome::Witness { trace, k } = bmc::run(&d, &Query::new(Task::Satisfy(f.clone()), 5)).unwrap() else {
        panic!()
    };
    for c in &d.constraints {
        assert!(trace::eval(&trace, &c.formula).unwrap().value);
    }
    let mut q = Query::new(Task::Satisfy(f), 5);
    q.k_min = k;
    assert!(matches!(bmc::run(&d, &q).unwrap(), Outcome::Witness { k: again, .. } if again == k));
    for small in 0..k {
        let mut q = q.clone();
        (q.k_min, q.k_max) = (small, small);
        assert_eq!(bmc::run(&d, &q).unwrap(), Outcome::NoWitnessUpTo(small));
    }
}

#[test]
fn bounds_are_checked() {
    let d = parse_domain(MAIL).unwrap();
    let mut q = Query::new(Task::Satisfy(Formula::True), 1);
    q.k_min = 2;
    assert!(bmc::run(&d, &q).is_err());
}

#[test]
fn mail_extensions_start_with_begin() {
    let d = parse_domain(MAIL).unwrap();
    let ts = all_extensions(&d, 3, ExpandOptions::default(), &SolveConfig::all()).unwrap();
    assert!(!ts.is_empty());
    assert!(ts.iter().all(|t| t.actions[0] == "begin"));
}

#[test]
fn spin_reaches_both_outcomes() {
    let d = parse_domain(
        "action spin. fluent loaded. inertial loaded. initially -loaded.
         law [spin] loaded if not [spin] -loaded. law [spin] -loaded if not [spin] loaded.",
    )
    .unwrap();
    let ts = all_extensions(&d, 1, ExpandOptions::default(), &SolveConfig::all()).unwrap();
    let after: Vec<bool> = ts.iter().map(|t| t.valuation[1][0]).collect();
    assert!(after.contains(&true) && after.contains(&false));
}

#[test]
fn transition_system_of_the_shooting_domain() {
    let d = parse_domain(YALE).unwrap();
    let idx = |f: &str| d.fluents.iter().position(|x| x == f).unwrap();
    let ts = transitions(&d, 1, ExpandOptions::default()).unwrap();
    assert!(!ts.is_empty());
    // alive, loaded, in_sight, frightened in declaration order.
    let w = vec![true, false, false, false];
    let mut w2 = w.clone();
    w2[idx("loaded")] = true;
    assert!(ts.contains(&(w, "load".to_string(), w2)));
    for (w, a, w2) in &ts {
        for s in [w, w2] {
            // frightened if in_sight, alive.
            assert!(!(s[idx("in_sight")] && s[idx("alive")]) || s[idx("frightened")]);
        }
        assert!(!(a == "load" && w[idx("loaded")]), "load while loaded");
        if a == "in_sight?" {
            assert!(w[idx("in_sight")]);
        }
    }
}
