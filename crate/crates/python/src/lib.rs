//! Python bindings. Domains and formulas are passed as source text, traces
//! come back in the structured (JSON) format.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use tasp::bmc::{self, Outcome, Query, Task};
use tasp::ground::Mode;
use tasp::oracle;
use tasp::solver::SolveConfig;
use tasp::syntax::{expand_with, parse_domain, parse_formula, DomainDescription, ExpandOptions, Formula};
use tasp::trace;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn options(dummy: bool, completion: bool) -> ExpandOptions {
    ExpandOptions { completion, dummy }
}

fn load(domain: &str, formula: &str, opts: ExpandOptions) -> PyResult<(DomainDescription, Formula)> {
    let d = parse_domain(domain).map_err(err)?;
    let f = parse_formula(formula, &expand_with(&d, opts)).map_err(err)?;
    Ok((d, f))
}

/// `(status, k, trace)`: status is one of `witness`, `no_witness`, `valid`,
/// `counterexample`, `ill_defined`; `trace` is `None` when there is none.
type Answer = (String, Option<u32>, Option<String>);

fn answer(o: Outcome) -> PyResult<Answer> {
    Ok(match o {
        Outcome::Witness { trace, k } => ("witness".into(), Some(k), Some(trace::render_structured(&trace))),
        Outcome::Counterexample { trace, k } => {
            ("counterexample".into(), Some(k), Some(trace::render_structured(&trace)))
        }
        Outcome::NoWitnessUpTo(k) => ("no_witness".into(), Some(k), None),
        Outcome::ValidUpTo(k) => ("valid".into(), Some(k), None),
        Outcome::IllDefined { trace, k, .. } => ("ill_defined".into(), Some(k), Some(trace::render_structured(&trace))),
        Outcome::BudgetExhausted(k) => return Err(err(format!("conflict budget exhausted at k = {k}"))),
    })
}

fn query(task: Task, kmin: u32, kmax: u32, dummy: bool, completion: bool, seed: u64) -> Query {
    let cfg = SolveConfig { seed, ..SolveConfig::default() };
    Query { task, k_min: kmin, k_max: kmax, cfg, expand: options(dummy, completion) }
}

/// Searches for an extension satisfying `formula`.
#[pyfunction]
#[pyo3(signature = (domain, formula, kmax, kmin = 0, dummy = false, completion = true, seed = 0))]
fn check(
    domain: &str,
    formula: &str,
    kmax: u32,
    kmin: u32,
    dummy: bool,
    completion: bool,
    seed: u64,
) -> PyResult<Answer> {
    let (d, f) = load(domain, formula, options(dummy, completion))?;
    answer(bmc::run(&d, &query(Task::Satisfy(f), kmin, kmax, dummy, completion, seed)).map_err(err)?)
}

/// Searches for a counterexample to `formula`.
#[pyfunction]
#[pyo3(signature = (domain, formula, kmax, kmin = 0, dummy = false, completion = true, seed = 0))]
fn valid(
    domain: &str,
    formula: &str,
    kmax: u32,
    kmin: u32,
    dummy: bool,
    completion: bool,
    seed: u64,
) -> PyResult<Answer> {
    let (d, f) = load(domain, formula, options(dummy, completion))?;
    answer(bmc::run(&d, &query(Task::Validity(f), kmin, kmax, dummy, completion, seed)).map_err(err)?)
}

/// All extensions at bound `k`, at most `limit` of them.
#[pyfunction]
#[pyo3(signature = (domain, k, limit = None, dummy = false, completion = true))]
fn extensions(domain: &str, k: u32, limit: Option<usize>, dummy: bool, completion: bool) -> PyResult<Vec<String>> {
    let d = parse_domain(domain).map_err(err)?;
    let cfg = SolveConfig { max_models: limit, ..SolveConfig::default() };
    let ts = bmc::all_extensions(&d, k, options(dummy, completion), &cfg).map_err(err)?;
    Ok(ts.iter().map(trace::render_structured).collect())
}

/// The ground program at bound `k` as ASP text, with `formula` required.
#[pyfunction]
#[pyo3(signature = (domain, k, formula = None, dummy = false, completion = true))]
fn ground(domain: &str, k: u32, formula: Option<&str>, dummy: bool, completion: bool) -> PyResult<String> {
    let d = expand_with(&parse_domain(domain).map_err(err)?, options(dummy, completion));
    let mut g = bmc::ground_at(&d, k).map_err(err)?;
    if let Some(text) = formula {
        g.attach_formula(&parse_formula(text, &d).map_err(err)?, Mode::Require).map_err(err)?;
    }
    Ok(g.export_text())
}

/// Truth value of `formula` on a structured trace.
#[pyfunction]
fn eval_trace(trace_json: &str, formula: &str) -> PyResult<bool> {
    let t = trace::parse_structured(trace_json).map_err(err)?;
    let f = parse_formula(formula, &t.signature()).map_err(err)?;
    Ok(trace::eval(&t, &f).map_err(err)?.value)
}

/// `(domain, property, negated property)` for `n` dining philosophers.
#[pyfunction]
fn philosophers(n: usize) -> PyResult<(String, String, String)> {
    if n < 2 {
        return Err(err("need at least two philosophers"));
    }
    let (d, f) = tasp::philosophers::generate(n);
    Ok((d, f, tasp::philosophers::violation(n)))
}

/// `(oracle models, translation models, agree)` for the macro-expanded
/// domain at bound `k`.
#[pyfunction]
#[pyo3(signature = (domain, k, completion = true))]
fn crosscheck(domain: &str, k: u32, completion: bool) -> PyResult<(usize, usize, bool)> {
    let d = expand_with(&parse_domain(domain).map_err(err)?, options(false, completion));
    let r = oracle::crosscheck_theorem1(&d, k).map_err(err)?;
    Ok((r.oracle.len(), r.solver.len(), r.is_ok()))
}

#[pymodule]
fn pytasp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(valid, m)?)?;
    m.add_function(wrap_pyfunction!(extensions, m)?)?;
    m.add_function(wrap_pyfunction!(ground, m)?)?;
    m.add_function(wrap_pyfunction!(eval_trace, m)?)?;
    m.add_function(wrap_pyfunction!(philosophers, m)?)?;
    m.add_function(wrap_pyfunction!(crosscheck, m)?)?;
    Ok(())
}
