//! Bounded model checking by iterative deepening over the loop bound `k`.
//!
//! Every trace handed back is decoded from a genuine answer set and then
//! re-checked with [`trace::eval`], which does not go through the `sat`
//! rules at all.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::ground::{translate, GroundError, GroundProgram, Mode};
use crate::solver::{solve, Exhaustion, SolveConfig, SolveError};
use crate::syntax::{expand_with, DomainDescription, ExpandOptions, Formula, Program};
use crate::trace::{self, decode, decode_partial, LassoTrace, TraceError};

#[derive(Clone, Debug)]
pub enum Task {
    Satisfy(Formula),
    Validity(Formula),
    /// Is there a run executing the program after which the formula holds?
    Projection(Program, Formula),
    /// Runs reaching the fault observation before any of the other observations.
    Diagnosis {
        fault: Formula,
        observations: Vec<Formula>,
    },
    /// Searches for runs with an undefined fluent.
    WellDefined,
}

#[derive(Clone, Debug)]
pub struct Query {
    pub task: Task,
    pub k_min: u32,
    pub k_max: u32,
    pub cfg: SolveConfig,
    pub expand: ExpandOptions,
}

impl Query {
    pub fn new(task: Task, k_max: u32) -> Self {
        Query { task, k_min: 0, k_max, cfg: SolveConfig::default(), expand: ExpandOptions::default() }
    }

    pub fn with_dummy(mut self) -> Self {
        self.expand.dummy = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Witness {
        trace: LassoTrace,
        k: u32,
    },
    NoWitnessUpTo(u32),
    /// No counterexample for any bound up to this one. For
    /// [`Task::WellDefined`], no undefined fluent up to this bound.
    ValidUpTo(u32),
    Counterexample {
        trace: LassoTrace,
        k: u32,
    },
    /// A run in which the listed `(state, fluent)` pairs are undefined.
    IllDefined {
        trace: LassoTrace,
        k: u32,
        undefined: Vec<(u32, String)>,
    },
    BudgetExhausted(u32),
}

#[derive(Debug, Error)]
pub enum BmcError {
    #[error("k_min = {k_min} exceeds k_max = {k_max}")]
    Bounds { k_min: u32, k_max: u32 },
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("k = {k}: decoded trace fails the re-check: {detail}")]
    Recheck { k: u32, detail: String },
    #[error("k = {k}: conflict budget exhausted")]
    Budget { k: u32 },
}

/// The formula whose models are searched for, and whether a model refutes
/// the query (validity) or answers it.
fn goal(task: &Task) -> Option<(Formula, bool)> {
    match task {
        Task::Satisfy(f) => Some((f.clone(), false)),
        Task::Validity(f) => Some((f.negate(), true)),
        Task::Projection(p, l) => Some((Formula::diamond(p.clone(), l.clone()), false)),
        Task::Diagnosis { fault, observations } => {
            let quiet = observations.iter().map(|o| o.negate()).reduce(Formula::and).unwrap_or(Formula::True);
            Some((Formula::until(quiet, fault.clone()), false))
        }
        Task::WellDefined => None,
    }
}

fn recheck(d: &DomainDescription, t: &LassoTrace, goal: Option<&Formula>, k: u32) -> Result<(), BmcError> {
    for c in &d.constraints {
        if !trace::eval(t, &c.formula)?.value {
            return Err(BmcError::Recheck { k, detail: format!("constraint {} is false", c.formula) });
        }
    }
    if let Some(f) = goal {
        if !trace::eval(t, f)?.value {
            return Err(BmcError::Recheck { k, detail: format!("goal {f} is false") });
        }
    }
    Ok(())
}

/// Grounds `d` at bound `k` with its constraints required.
pub fn ground_at(d: &DomainDescription, k: u32) -> Result<GroundProgram, BmcError> {
    let mut g = translate(d, k);
    g.attach_constraints(d)?;
    Ok(g)
}

/// Runs a query, increasing `k` from `k_min` to `k_max`.
pub fn run(d: &DomainDescription, q: &Query) -> Result<Outcome, BmcError> {
    if q.k_min > q.k_max {
        return Err(BmcError::Bounds { k_min: q.k_min, k_max: q.k_max });
    }
    let d = expand_with(d, q.expand);
    let goal = goal(&q.task);
    let cfg = SolveConfig { max_models: Some(1), ..q.cfg.clone() };
    for k in q.k_min..=q.k_max {
        let mut g = ground_at(&d, k)?;
        match &goal {
            Some((f, _)) => {
                g.attach_formula(f, Mode::Require)?;
            }
            None => {
                g.attach_probe()?;
            }
        }
        let out = solve(&g, &cfg)?;
        let Some(m) = out.models.first() else {
            if out.status == Exhaustion::Budget {
                return Ok(Outcome::BudgetExhausted(k));
            }
            continue;
        };
        return match &goal {
            Some((f, refutes)) => {
                let trace = decode(&g, m)?;
                recheck(&d, &trace, Some(f), k)?;
                Ok(if *refutes { Outcome::Counterexample { trace, k } } else { Outcome::Witness { trace, k } })
            }
            None => {
                let (trace, undefined) = decode_partial(&g, m)?;
                if undefined.is_empty() {
                    return Err(BmcError::Recheck { k, detail: "probe fired but every fluent is defined".into() });
                }
                Ok(Outcome::IllDefined { trace, k, undefined })
            }
        };
    }
    Ok(match goal {
        Some((_, true)) | None => Outcome::ValidUpTo(q.k_max),
        Some((_, false)) => Outcome::NoWitnessUpTo(q.k_max),
    })
}

/// All extensions at bound `k`, as decoded traces.
pub fn all_extensions(
    d: &DomainDescription,
    k: u32,
    expand: ExpandOptions,
    cfg: &SolveConfig,
) -> Result<Vec<LassoTrace>, BmcError> {
    let d = expand_with(d, expand);
    let g = ground_at(&d, k)?;
    let out = solve(&g, cfg)?;
    if out.status == Exhaustion::Budget {
        return Err(BmcError::Budget { k });
    }
    let mut traces = Vec::new();
    for m in &out.models {
        let t = decode(&g, m)?;
        recheck(&d, &t, None, k)?;
        traces.push(t);
    }
    Ok(traces)
}

pub type Transition = (Vec<bool>, String, Vec<bool>);

/// State transitions of the laws alone (constraints dropped) seen on runs
/// of bound `k`.
pub fn transitions(d: &DomainDescription, k: u32, expand: ExpandOptions) -> Result<BTreeSet<Transition>, BmcError> {
    let mut d = expand_with(d, expand);
    d.constraints.clear();
    let g = translate(&d, k);
    let out = solve(&g, &SolveConfig::all())?;
    let mut set = BTreeSet::new();
    for m in &out.models {
        let t = decode(&g, m)?;
        for s in 0..t.num_states() {
            set.insert((t.valuation[s].clone(), t.actions[s].clone(), t.valuation[t.succ(s)].clone()));
        }
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_domain, parse_formula};

    #[test]
    fn deterministic_domain_has_one_extension() {
        let d = parse_domain("fluent f. action a. inertial f. initially f.").unwrap();
        let ts = all_extensions(&d, 0, ExpandOptions::default(), &SolveConfig::all()).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].valuation, vec![vec![true]]);
    }

    #[test]
    fn satisfy_and_validity() {
        let d = parse_domain("fluent f. action a. action b. inertial f. initially -f. law [a] f.").unwrap();
        let f = parse_formula("F f", &d).unwrap();
        match run(&d, &Query::new(Task::Satisfy(f.clone()), 3)).unwrap() {
            Outcome::Witness { trace, k } => {
                // At k = 0 the self-loop forbids any change.
                assert_eq!(k, 1);
                assert_eq!(trace.actions[0], "a");
            }
            other => panic!("{other:?}"),
        }
        match run(&d, &Query::new(Task::Validity(f), 3)).unwrap() {
            Outcome::Counterexample { trace, .. } => assert!(trace.actions.iter().all(|a| a == "b")),
            other => panic!("{other:?}"),
        }
        let g = parse_formula("G (f -> G f)", &d).unwrap();
        assert_eq!(run(&d, &Query::new(Task::Validity(g), 3)).unwrap(), Outcome::ValidUpTo(3));
    }

    #[test]
    fn undefined_fluent_is_reported() {
        let d = parse_domain("fluent f. fluent g. action a. inertial f. initially f.").unwrap();
        let mut q = Query::new(Task::WellDefined, 2);
        q.expand.completion = false;
        match run(&d, &q).unwrap() {
            Outcome::IllDefined { k, undefined, .. } => {
                assert_eq!(k, 0);
                assert!(undefined.iter().all(|(_, f)| f == "g"));
            }
            other => panic!("{other:?}"),
        }
        let d = parse_domain("fluent f. action a. inertial f.").unwrap();
        assert_eq!(run(&d, &Query::new(Task::WellDefined, 2)).unwrap(), Outcome::ValidUpTo(2));
    }
}
