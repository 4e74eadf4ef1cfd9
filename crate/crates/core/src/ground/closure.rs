//! Hash-consed formula terms in the shape used by the `sat` encoding.

use std::collections::HashMap;
use std::sync::Arc;

use crate::automata::{compile, reachable_handles, Nfa};
use crate::syntax::{Formula, Program};

use super::GroundError;

pub type TermId = u32;

/// Default bound on the number of closure entries.
pub const CLOSURE_LIMIT: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    True,
    Fluent(String),
    /// Leaf true in states where some fluent is undefined.
    Probe,
    Neg(TermId),
    Or(TermId, TermId),
    And(TermId, TermId),
    Impl(TermId, TermId),
    Until {
        aut: u32,
        q: u32,
        lhs: TermId,
        rhs: TermId,
    },
    Ev(TermId),
    Diamond(String, TermId),
    Box(String, TermId),
    Next(TermId),
}

/// All subformulas needed to ground a set of formulas, closed under the
/// until-successor relation.
#[derive(Clone, Debug)]
pub struct Closure {
    terms: Vec<Term>,
    index: HashMap<Term, TermId>,
    automata: Vec<Arc<Nfa>>,
    aut_index: HashMap<Program, u32>,
    limit: usize,
}

impl Default for Closure {
    fn default() -> Self {
        Closure::with_limit(CLOSURE_LIMIT)
    }
}

impl Closure {
    pub fn with_limit(limit: usize) -> Self {
        Closure { terms: Vec::new(), index: HashMap::new(), automata: Vec::new(), aut_index: HashMap::new(), limit }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, id: TermId) -> &Term {
        &self.terms[id as usize]
    }

    pub fn automata(&self) -> &[Arc<Nfa>] {
        &self.automata
    }

    pub fn lookup(&self, t: &Term) -> Option<TermId> {
        self.index.get(t).copied()
    }

    /// `aut`, `aut2`, `aut3`, ...
    pub fn automaton_name(i: u32) -> String {
        if i == 0 {
            "aut".to_string()
        } else {
            format!("aut{}", i + 1)
        }
    }

    pub fn intern(&mut self, t: Term) -> Result<TermId, GroundError> {
        if let Some(&id) = self.index.get(&t) {
            return Ok(id);
        }
        if self.terms.len() >= self.limit {
            return Err(GroundError::ClosureLimit { limit: self.limit });
        }
        let id = self.terms.len() as TermId;
        self.terms.push(t.clone());
        self.index.insert(t, id);
        Ok(id)
    }

    fn automaton(&mut self, p: &Program) -> u32 {
        if let Some(&i) = self.aut_index.get(p) {
            return i;
        }
        let i = self.automata.len() as u32;
        self.automata.push(compile(p).nfa);
        self.aut_index.insert(p.clone(), i);
        i
    }

    /// Interns `until(aut, q, lhs, rhs)` for `q` and every state reachable from it.
    fn until(&mut self, p: &Program, lhs: TermId, rhs: TermId) -> Result<TermId, GroundError> {
        let aut = self.automaton(p);
        let nfa = self.automata[aut as usize].clone();
        let start = crate::automata::AutomatonHandle { nfa, state: 0 };
        let mut first = None;
        for h in reachable_handles(&start) {
            let id = self.intern(Term::Until { aut, q: h.state as u32, lhs, rhs })?;
            first.get_or_insert(id);
        }
        Ok(first.unwrap())
    }

    /// Adds a formula and its subformulas. `sigma` is the action alphabet.
    pub fn add_formula(&mut self, f: &Formula, sigma: &[String]) -> Result<TermId, GroundError> {
        match f {
            Formula::True => self.intern(Term::True),
            Formula::False => {
                let t = self.intern(Term::True)?;
                self.intern(Term::Neg(t))
            }
            Formula::Lit(l) => {
                let t = self.intern(Term::Fluent(l.name.clone()))?;
                if l.positive {
                    Ok(t)
                } else {
                    self.intern(Term::Neg(t))
                }
            }
            Formula::Not(a) => {
                let a = self.add_formula(a, sigma)?;
                self.intern(Term::Neg(a))
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.add_formula(a, sigma)?, self.add_formula(b, sigma)?);
                self.intern(Term::Or(a, b))
            }
            Formula::And(a, b) => {
                let (a, b) = (self.add_formula(a, sigma)?, self.add_formula(b, sigma)?);
                self.intern(Term::And(a, b))
            }
            Formula::Implies(a, b) => {
                let (a, b) = (self.add_formula(a, sigma)?, self.add_formula(b, sigma)?);
                self.intern(Term::Impl(a, b))
            }
            Formula::Until(a, b) => {
                let (a, b) = (self.add_formula(a, sigma)?, self.add_formula(b, sigma)?);
                self.until(&Program::star(Program::any_of(sigma)), a, b)
            }
            Formula::UntilProg(p, a, b) => {
                let (a, b) = (self.add_formula(a, sigma)?, self.add_formula(b, sigma)?);
                self.until(p, a, b)
            }
            Formula::Diamond(p, a) => {
                let a = self.add_formula(a, sigma)?;
                match p.leaf_symbol() {
                    Some(sym) => self.intern(Term::Diamond(sym, a)),
                    None => {
                        let t = self.intern(Term::True)?;
                        self.until(p, t, a)
                    }
                }
            }
            Formula::Box(p, a) => {
                let a = self.add_formula(a, sigma)?;
                match p.leaf_symbol() {
                    Some(sym) => self.intern(Term::Box(sym, a)),
                    None => {
                        let t = self.intern(Term::True)?;
                        let na = self.intern(Term::Neg(a))?;
                        let u = self.until(p, t, na)?;
                        self.intern(Term::Neg(u))
                    }
                }
            }
            Formula::Next(a) => {
                let a = self.add_formula(a, sigma)?;
                self.intern(Term::Next(a))
            }
            Formula::Eventually(a) => {
                let a = self.add_formula(a, sigma)?;
                self.intern(Term::Ev(a))
            }
            Formula::Always(a) => {
                let a = self.add_formula(a, sigma)?;
                let na = self.intern(Term::Neg(a))?;
                let ev = self.intern(Term::Ev(na))?;
                self.intern(Term::Neg(ev))
            }
        }
    }

    /// `ev(probe)`: some state has an undefined fluent.
    pub fn add_probe(&mut self) -> Result<TermId, GroundError> {
        let p = self.intern(Term::Probe)?;
        self.intern(Term::Ev(p))
    }

    /// Text form, e.g. `until(aut,q1,true,neg(mail(b)))`.
    pub fn text(&self, id: TermId) -> String {
        let t = |x: TermId| self.text(x);
        match self.term(id) {
            Term::True => "true".into(),
            Term::Fluent(f) => f.clone(),
            Term::Probe => "undefined_fluent".into(),
            Term::Neg(a) => format!("neg({})", t(*a)),
            Term::Or(a, b) => format!("or({},{})", t(*a), t(*b)),
            Term::And(a, b) => format!("and({},{})", t(*a), t(*b)),
            Term::Impl(a, b) => format!("impl({},{})", t(*a), t(*b)),
            Term::Until { aut, q, lhs, rhs } => {
                format!("until({},q{},{},{})", Self::automaton_name(*aut), q + 1, t(*lhs), t(*rhs))
            }
            Term::Ev(a) => format!("ev({})", t(*a)),
            Term::Diamond(s, a) => format!("diamond({},{})", action_text(s), t(*a)),
            Term::Box(s, a) => format!("box({},{})", action_text(s), t(*a)),
            Term::Next(a) => format!("nxt({})", t(*a)),
        }
    }
}

/// Action names as ASP terms: `in_sight?` prints as `test(in_sight)`.
pub fn action_text(a: &str) -> String {
    match a.strip_suffix('?') {
        Some(l) => match l.strip_prefix('-') {
            Some(f) => format!("test(neg({f}))"),
            None => format!("test({l})"),
        },
        None => a.to_string(),
    }
}
