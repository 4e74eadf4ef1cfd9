//! Lasso traces: decoding answer sets, evaluating DLTL formulas, rendering.
//!
//! A trace with bound `k` and loop target `j` stands for the infinite word
//! `a1 ... aj (a(j+1) ... a(k+1))^ω`; state `k+1` is state `j` again.
//!
//! [`eval`] works directly on the finite lasso and shares nothing with the
//! `sat` encoding: until formulas are decided by a least fixpoint over
//! (automaton state, trace state) pairs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{compile, Nfa};
use crate::ground::{GroundAtom, GroundProgram, Interpretation};
use crate::syntax::{DomainDescription, Formula};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("fluent `{fluent}` is undefined in state {state}")]
    Partial { state: u32, fluent: String },
    #[error("no action occurs in state {0}")]
    MissingAction(u32),
    #[error("state {0} has more than one action")]
    ManyActions(u32),
    #[error("no back edge from the last state")]
    MissingLoop,
    #[error("formula has {size} nodes, over the limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("malformed trace: {0}")]
    Malformed(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LassoTrace {
    pub k: u32,
    pub loop_to: u32,
    /// Action executed in each state `0..=k`.
    pub actions: Vec<String>,
    pub fluents: Vec<String>,
    /// `valuation[s][i]` is the value of `fluents[i]` in state `s`, `s <= k`.
    pub valuation: Vec<Vec<bool>>,
    /// Action alphabet; used to expand `X`, `F`, `G` and LTL until.
    pub alphabet: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub value: bool,
    /// For a true top-level until, the state where its right side was reached.
    pub witness: Option<u32>,
}

const FORMULA_LIMIT: usize = 10_000;

impl LassoTrace {
    pub fn num_states(&self) -> usize {
        self.k as usize + 1
    }

    pub fn succ(&self, s: usize) -> usize {
        if s < self.k as usize {
            s + 1
        } else {
            self.loop_to as usize
        }
    }

    pub fn holds(&self, s: usize, fluent: &str) -> Option<bool> {
        let i = self.fluents.iter().position(|f| f == fluent)?;
        Some(self.valuation[s][i])
    }

    /// State reached after `p` steps of the infinite word.
    pub fn position(&self, p: usize) -> usize {
        let k = self.k as usize;
        if p <= k {
            p
        } else {
            let j = self.loop_to as usize;
            j + (p - j) % (k + 1 - j)
        }
    }

    /// Unrolls the loop once more: same infinite word, larger bound.
    pub fn unroll(&self) -> LassoTrace {
        let mut t = self.clone();
        let (j, k) = (self.loop_to as usize, self.k as usize);
        for s in j..=k {
            t.actions.push(self.actions[s].clone());
            t.valuation.push(self.valuation[s].clone());
        }
        t.k = (k + (k + 1 - j)) as u32;
        t.loop_to = (k + 1) as u32;
        t
    }
}

fn find_actions(g: &GroundProgram, m: &Interpretation, s: u32) -> Result<String, TraceError> {
    let mut found = None;
    for a in &g.actions {
        if let Some(id) = g.lookup(&GroundAtom::Occurs(a.clone(), s)) {
            if m.contains(id) {
                if found.is_some() {
                    return Err(TraceError::ManyActions(s));
                }
                found = Some(a.clone());
            }
        }
    }
    found.ok_or(TraceError::MissingAction(s))
}

fn skeleton(g: &GroundProgram, m: &Interpretation) -> Result<(Vec<String>, u32), TraceError> {
    let actions = (0..=g.k).map(|s| find_actions(g, m, s)).collect::<Result<Vec<_>, _>>()?;
    let j = (0..=g.k)
        .find(|&j| g.lookup(&GroundAtom::Next(g.k, j)).is_some_and(|id| m.contains(id)))
        .ok_or(TraceError::MissingLoop)?;
    Ok((actions, j))
}

fn value(g: &GroundProgram, m: &Interpretation, f: &str, s: u32) -> Option<bool> {
    let on = |a: GroundAtom| g.lookup(&a).is_some_and(|id| m.contains(id));
    if on(GroundAtom::Holds(f.to_string(), s)) {
        Some(true)
    } else if on(GroundAtom::NHolds(f.to_string(), s)) {
        Some(false)
    } else {
        None
    }
}

/// Reads a lasso trace off an answer set of a translated program.
pub fn decode(g: &GroundProgram, m: &Interpretation) -> Result<LassoTrace, TraceError> {
    let (t, undefined) = decode_partial(g, m)?;
    match undefined.into_iter().next() {
        Some((state, fluent)) => Err(TraceError::Partial { state, fluent }),
        None => Ok(t),
    }
}

/// Like [`decode`], but tolerates undefined fluents: they read as false and
/// are listed as `(state, fluent)` pairs, states `0..=k+1`.
pub fn decode_partial(g: &GroundProgram, m: &Interpretation) -> Result<(LassoTrace, Vec<(u32, String)>), TraceError> {
    let (actions, j) = skeleton(g, m)?;
    let mut undefined = Vec::new();
    let mut valuation = Vec::new();
    for s in 0..=g.k + 1 {
        let mut row = Vec::new();
        for f in &g.fluents {
            let v = value(g, m, f, s);
            if v.is_none() {
                undefined.push((s, f.clone()));
            }
            row.push(v.unwrap_or(false));
        }
        if s <= g.k {
            valuation.push(row);
        }
    }
    let t =
        LassoTrace { k: g.k, loop_to: j, actions, fluents: g.fluents.clone(), valuation, alphabet: g.actions.clone() };
    Ok((t, undefined))
}

struct Evaluator<'a> {
    t: &'a LassoTrace,
}

impl Evaluator<'_> {
    /// Truth value in every state `0..=k`.
    fn states(&self, f: &Formula) -> Vec<bool> {
        let n = self.t.num_states();
        match f {
            Formula::True => vec![true; n],
            Formula::Lit(l) => {
                let i = self.t.fluents.iter().position(|x| *x == l.name);
                (0..n).map(|s| i.is_some_and(|i| self.t.valuation[s][i]) == l.positive).collect()
            }
            Formula::Not(a) => self.states(a).into_iter().map(|v| !v).collect(),
            Formula::Or(a, b) => {
                let (a, b) = (self.states(a), self.states(b));
                a.iter().zip(&b).map(|(x, y)| *x || *y).collect()
            }
            Formula::UntilProg(p, a, b) => {
                let nfa = compile(p).nfa;
                let (a, b) = (self.states(a), self.states(b));
                let u = self.until_table(&nfa, &a, &b);
                (0..n).map(|s| u[0][s]).collect()
            }
            other => unreachable!("not a core formula: {other}"),
        }
    }

    /// Least solution of the two until axioms: `u[q][s]` holds iff the
    /// automaton started in `q` can reach a final state along the trace
    /// from `s` with `a` holding before and `b` at the end.
    fn until_table(&self, nfa: &Nfa, a: &[bool], b: &[bool]) -> Vec<Vec<bool>> {
        let n = self.t.num_states();
        let nq = nfa.num_states();
        let mut u = vec![vec![false; n]; nq];
        loop {
            let mut changed = false;
            for s in (0..n).rev() {
                for q in 0..nq {
                    if u[q][s] {
                        continue;
                    }
                    let v = (nfa.finals[q] && b[s])
                        || (a[s] && nfa.successors(q, &self.t.actions[s]).any(|q2| u[q2][self.t.succ(s)]));
                    if v {
                        u[q][s] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                return u;
            }
        }
    }

    /// First state along the run from 0 where the right side of a true
    /// top-level until is reached.
    fn witness(&self, f: &Formula) -> Option<u32> {
        let Formula::UntilProg(p, a, b) = f else { return None };
        let nfa = compile(p).nfa;
        let (a, b) = (self.states(a), self.states(b));
        let u = self.until_table(&nfa, &a, &b);
        let (mut q, mut s) = (0usize, 0usize);
        for _ in 0..=nfa.num_states() * self.t.num_states() {
            if !u[q][s] {
                return None;
            }
            if nfa.finals[q] && b[s] {
                return Some(s as u32);
            }
            let s2 = self.t.succ(s);
            q = nfa.successors(q, &self.t.actions[s]).find(|&q2| u[q2][s2])?;
            s = s2;
        }
        None
    }
}

/// Truth of `f` at state 0 of the infinite word represented by `t`.
pub fn eval(t: &LassoTrace, f: &Formula) -> Result<Verdict, TraceError> {
    let core = f.to_core(&t.alphabet);
    if core.size() > FORMULA_LIMIT {
        return Err(TraceError::TooLarge { size: core.size(), limit: FORMULA_LIMIT });
    }
    let ev = Evaluator { t };
    let value = ev.states(&core)[0];
    let witness = if value { ev.witness(&core) } else { None };
    Ok(Verdict { value, witness })
}

fn and3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(false), _) | (_, Some(false)) => Some(false),
        (Some(true), Some(true)) => Some(true),
        _ => None,
    }
}

fn or3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(true), _) | (_, Some(true)) => Some(true),
        (Some(false), Some(false)) => Some(false),
        _ => None,
    }
}

/// Evaluates `f` on the first `depth` positions of the unfolded word,
/// returning `None` when that prefix does not settle the verdict.
pub fn eval_unfolded(t: &LassoTrace, f: &Formula, depth: usize) -> Option<bool> {
    assert!(depth <= 10_000, "unfolding depth above 10000");
    fn go(t: &LassoTrace, f: &Formula, depth: usize) -> Vec<Option<bool>> {
        match f {
            Formula::True => vec![Some(true); depth],
            Formula::Lit(l) => {
                let i = t.fluents.iter().position(|x| *x == l.name);
                (0..depth).map(|p| Some(i.is_some_and(|i| t.valuation[t.position(p)][i]) == l.positive)).collect()
            }
            Formula::Not(a) => go(t, a, depth).into_iter().map(|v| v.map(|x| !x)).collect(),
            Formula::Or(a, b) => {
                let (a, b) = (go(t, a, depth), go(t, b, depth));
                a.into_iter().zip(b).map(|(x, y)| or3(x, y)).collect()
            }
            Formula::UntilProg(p, a, b) => {
                let nfa = compile(p).nfa;
                let (a, b) = (go(t, a, depth), go(t, b, depth));
                let nq = nfa.num_states();
                // Unknown past the horizon.
                let mut next: Vec<Option<bool>> = vec![None; nq];
                let mut out = vec![None; depth];
                for pos in (0..depth).rev() {
                    let act = &t.actions[t.position(pos)];
                    let cur: Vec<Option<bool>> = (0..nq)
                        .map(|q| {
                            let here = if nfa.finals[q] { b[pos] } else { Some(false) };
                            // Unknown must not short-circuit: a later true still wins.
                            #[allow(clippy::manual_try_fold)]
                            let step = nfa.successors(q, act).fold(Some(false), |acc, q2| or3(acc, next[q2]));
                            or3(here, and3(a[pos], step))
                        })
                        .collect();
                    out[pos] = cur[0];
                    next = cur;
                }
                out
            }
            other => unreachable!("not a core formula: {other}"),
        }
    }
    if depth == 0 {
        return None;
    }
    go(t, &f.to_core(&t.alphabet), depth)[0]
}

fn literal(name: &str, v: bool) -> String {
    if v {
        name.to_string()
    } else {
        format!("-{name}")
    }
}

/// Text rendering: the initial state, then per state the action that led to
/// it and the fluents it changed, then the back edge.
pub fn render_text(t: &LassoTrace) -> String {
    let mut out = String::new();
    let initial: Vec<String> = t.fluents.iter().zip(&t.valuation[0]).map(|(f, v)| literal(f, *v)).collect();
    let _ = writeln!(out, "state 0: {}", initial.join(" "));
    for s in 1..t.num_states() {
        let changed: Vec<String> = t
            .fluents
            .iter()
            .enumerate()
            .filter(|(i, _)| t.valuation[s][*i] != t.valuation[s - 1][*i])
            .map(|(i, f)| literal(f, t.valuation[s][i]))
            .collect();
        let changed = if changed.is_empty() { "(unchanged)".to_string() } else { changed.join(" ") };
        let _ = writeln!(out, "state {s}: {} ⇒ {changed}", t.actions[s - 1]);
    }
    let _ = writeln!(out, "then {}, loop → {}", t.actions[t.k as usize], t.loop_to);
    out
}

#[derive(Serialize, Deserialize)]
struct StateDoc {
    action: String,
    holds: BTreeMap<String, bool>,
}

#[derive(Serialize, Deserialize)]
struct TraceDoc {
    k: u32,
    #[serde(rename = "loop")]
    loop_to: u32,
    #[serde(default)]
    alphabet: Vec<String>,
    states: Vec<StateDoc>,
}

/// JSON rendering with fields `k`, `loop`, `alphabet` and `states[]`, each
/// state carrying `action` and a sorted `holds` map.
pub fn render_structured(t: &LassoTrace) -> String {
    let doc = TraceDoc {
        k: t.k,
        loop_to: t.loop_to,
        alphabet: t.alphabet.clone(),
        states: (0..t.num_states())
            .map(|s| StateDoc {
                action: t.actions[s].clone(),
                holds: t.fluents.iter().cloned().zip(t.valuation[s].iter().copied()).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("trace serializes")
}

/// Reads the format written by [`render_structured`]. When `alphabet` is
/// absent, the actions occurring in the trace are used.
pub fn parse_structured(src: &str) -> Result<LassoTrace, TraceError> {
    let doc: TraceDoc = serde_json::from_str(src).map_err(|e| TraceError::Malformed(e.to_string()))?;
    if doc.states.len() != doc.k as usize + 1 {
        return Err(TraceError::Malformed(format!("expected {} states, found {}", doc.k + 1, doc.states.len())));
    }
    if doc.loop_to > doc.k {
        return Err(TraceError::Malformed(format!("loop target {} beyond k = {}", doc.loop_to, doc.k)));
    }
    let fluents: Vec<String> = doc.states[0].holds.keys().cloned().collect();
    let mut valuation = Vec::new();
    for (s, st) in doc.states.iter().enumerate() {
        if st.holds.keys().ne(fluents.iter()) {
            return Err(TraceError::Malformed(format!("state {s} has a different fluent set")));
        }
        valuation.push(st.holds.values().copied().collect());
    }
    let actions: Vec<String> = doc.states.iter().map(|s| s.action.clone()).collect();
    let mut alphabet = doc.alphabet;
    for a in &actions {
        if !alphabet.contains(a) {
            alphabet.push(a.clone());
        }
    }
    Ok(LassoTrace { k: doc.k, loop_to: doc.loop_to, actions, fluents, valuation, alphabet })
}

impl LassoTrace {
    /// A signature-only domain for parsing formulas against this trace.
    pub fn signature(&self) -> DomainDescription {
        DomainDescription { actions: self.alphabet.clone(), fluents: self.fluents.clone(), ..Default::default() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn trace(k: u32, j: u32, actions: &[&str], f_values: &[bool]) -> LassoTrace {
        LassoTrace {
            k,
            loop_to: j,
            actions: actions.iter().map(|s| s.to_string()).collect(),
            fluents: vec!["p".into()],
            valuation: f_values.iter().map(|&v| vec![v]).collect(),
            alphabet: vec!["a".into(), "b".into()],
        }
    }

    fn check(t: &LassoTrace, src: &str) -> bool {
        eval(t, &parse_formula(src, &t.signature()).unwrap()).unwrap().value
    }

    #[test]
    fn basic_verdicts() {
        let t = trace(2, 1, &["a", "b", "a"], &[false, true, false]);
        assert!(check(&t, "true"));
        assert!(check(&t, "F p"));
        assert!(check(&t, "G F p"));
        assert!(!check(&t, "F G p"));
        assert!(check(&t, "<a> p"));
        assert!(!check(&t, "<b> p"));
        assert!(check(&t, "[b] false"));
        assert!(check(&t, "<a; b; a> p"));
        assert!(!check(&t, "<a; b; a; b> p"));
        assert!(check(&t, "~p U{a; b*} p"));
        assert!(!check(&t, "~p U{a; b*} ~p"));
        assert!(!check(&t, "p U{a; b*} ~p"));
    }

    #[test]
    fn witness_points_at_right_side() {
        let t = trace(2, 1, &["a", "b", "a"], &[false, false, true]);
        let v = eval(&t, &parse_formula("F p", &t.signature()).unwrap()).unwrap();
        assert_eq!(v, Verdict { value: true, witness: Some(2) });
    }

    #[test]
    fn unfolded_needs_enough_depth() {
        // p first holds at position 5 of the unfolding.
        let t = trace(5, 5, &["a", "a", "a", "a", "a", "a"], &[false, false, false, false, false, true]);
        let f = parse_formula("F p", &t.signature()).unwrap();
        assert_eq!(eval_unfolded(&t, &f, 4), None);
        assert_eq!(eval_unfolded(&t, &f, 6), Some(true));
        let g = parse_formula("p", &t.signature()).unwrap();
        assert_eq!(eval_unfolded(&t, &g, 1), Some(false));
    }

    #[test]
    fn unroll_preserves_word() {
        let t = trace(2, 1, &["a", "b", "a"], &[false, true, false]);
        let u = t.unroll();
        assert_eq!(u.k, 4);
        for p in 0..20 {
            assert_eq!(t.actions[t.position(p)], u.actions[u.position(p)]);
            assert_eq!(t.valuation[t.position(p)], u.valuation[u.position(p)]);
        }
        assert!(check(&u, "G F p") && !check(&u, "F G p"));
    }

    #[test]
    fn render_and_parse() {
        let t = trace(0, 0, &["a"], &[true]);
        let text = render_text(&t);
        assert!(text.contains("loop → 0"), "{text}");
        assert_eq!(text.lines().count(), 2);
        let back = parse_structured(&render_structured(&t)).unwrap();
        assert_eq!(back, t);
    }
}
