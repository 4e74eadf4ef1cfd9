//! Grounding of action theories and DLTL formulas into normal logic programs.
//!
//! A bound `k` fixes the states `0..=k` of a lasso plus the successor state
//! `k+1`, which must coincide with the loop target `j` chosen by `next(k,j)`.

mod closure;
pub mod diff;
mod export;
pub mod text;
mod translate;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use closure::{action_text, Closure, Term, TermId, CLOSURE_LIMIT};
pub use translate::translate;

pub type AtomId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroundError {
    #[error("formula closure exceeds {limit} entries")]
    ClosureLimit { limit: usize },
    #[error("undeclared symbol `{0}` in formula")]
    Undeclared(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroundAtom {
    Holds(String, u32),
    NHolds(String, u32),
    Occurs(String, u32),
    NOccurs(String, u32),
    Next(u32, u32),
    NNext(u32, u32),
    EqLast(u32),
    DiffLast(u32),
    Sat(TermId, u32),
    UndefinedFluent(u32),
    Aux(String),
}

/// `head :- pos, not neg.` A missing head is a constraint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Option<AtomId>,
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
}

impl Rule {
    pub fn fact(head: AtomId) -> Self {
        Rule { head: Some(head), pos: vec![], neg: vec![] }
    }
    pub fn new(head: Option<AtomId>, pos: Vec<AtomId>, neg: Vec<AtomId>) -> Self {
        Rule { head, pos, neg }
    }
}

/// Whether an attached formula must hold or must fail at state 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Require,
    Forbid,
}

/// A set of atoms, stored densely.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interpretation {
    truth: Vec<bool>,
}

impl Interpretation {
    pub fn empty(n: usize) -> Self {
        Interpretation { truth: vec![false; n] }
    }

    pub fn from_truth(truth: Vec<bool>) -> Self {
        Interpretation { truth }
    }

    pub fn from_atoms(n: usize, atoms: impl IntoIterator<Item = AtomId>) -> Self {
        let mut i = Self::empty(n);
        for a in atoms {
            i.truth[a as usize] = true;
        }
        i
    }

    pub fn contains(&self, a: AtomId) -> bool {
        self.truth.get(a as usize).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, a: AtomId) {
        self.truth[a as usize] = true;
    }

    pub fn len(&self) -> usize {
        self.truth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.truth.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.truth.iter().enumerate().filter(|(_, t)| **t).map(|(i, _)| i as AtomId)
    }

    pub fn truth(&self) -> &[bool] {
        &self.truth
    }
}

/// A ground normal program with constraints, plus the bookkeeping needed to
/// decode answer sets back into traces.
#[derive(Clone, Debug)]
pub struct GroundProgram {
    atoms: Vec<GroundAtom>,
    index: HashMap<GroundAtom, AtomId>,
    pub rules: Vec<Rule>,
    pub k: u32,
    pub actions: Vec<String>,
    pub fluents: Vec<String>,
    pub closure: Closure,
    /// Closure entries that already have their `sat` rules.
    grounded_terms: usize,
    /// Preferred decision atoms, in order.
    pub hints: Vec<AtomId>,
}

impl GroundProgram {
    /// An empty program with no action theory attached.
    pub fn new() -> Self {
        GroundProgram {
            atoms: Vec::new(),
            index: HashMap::new(),
            rules: Vec::new(),
            k: 0,
            actions: Vec::new(),
            fluents: Vec::new(),
            closure: Closure::default(),
            grounded_terms: 0,
            hints: Vec::new(),
        }
    }

    /// A program over auxiliary atoms `x0..x{n-1}`.
    pub fn from_rules(num_atoms: usize, rules: Vec<Rule>) -> Self {
        let mut g = GroundProgram::new();
        for i in 0..num_atoms {
            g.atom(GroundAtom::Aux(format!("x{i}")));
        }
        for r in &rules {
            for a in r.head.iter().chain(&r.pos).chain(&r.neg) {
                assert!((*a as usize) < num_atoms, "atom {a} out of range");
            }
        }
        g.rules = rules;
        g
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom(&mut self, a: GroundAtom) -> AtomId {
        if let Some(&id) = self.index.get(&a) {
            return id;
        }
        let id = self.atoms.len() as AtomId;
        self.atoms.push(a.clone());
        self.index.insert(a, id);
        id
    }

    pub fn lookup(&self, a: &GroundAtom) -> Option<AtomId> {
        self.index.get(a).copied()
    }

    pub fn atom_of(&self, id: AtomId) -> &GroundAtom {
        &self.atoms[id as usize]
    }

    pub fn add_rule(&mut self, r: Rule) {
        self.rules.push(r);
    }

    /// Atom in ASP syntax, e.g. `holds(mail(b),3)` or `-next(3,1)`.
    pub fn atom_text(&self, id: AtomId) -> String {
        match self.atom_of(id) {
            GroundAtom::Holds(f, s) => format!("holds({f},{s})"),
            GroundAtom::NHolds(f, s) => format!("-holds({f},{s})"),
            GroundAtom::Occurs(a, s) => format!("occurs({},{s})", action_text(a)),
            GroundAtom::NOccurs(a, s) => format!("~occurs({},{s})", action_text(a)),
            GroundAtom::Next(i, j) => format!("next({i},{j})"),
            GroundAtom::NNext(i, j) => format!("-next({i},{j})"),
            GroundAtom::EqLast(s) => format!("eq_last({s})"),
            GroundAtom::DiffLast(s) => format!("diff_last({s})"),
            GroundAtom::Sat(t, s) => format!("sat({},{s})", self.closure.text(*t)),
            GroundAtom::UndefinedFluent(s) => format!("undefined_fluent({s})"),
            GroundAtom::Aux(n) => n.clone(),
        }
    }

    pub fn rule_text(&self, r: &Rule) -> String {
        let mut body: Vec<String> = r.pos.iter().map(|&a| self.atom_text(a)).collect();
        body.extend(r.neg.iter().map(|&a| format!("not {}", self.atom_text(a))));
        match (r.head, body.is_empty()) {
            (Some(h), true) => format!("{}.", self.atom_text(h)),
            (Some(h), false) => format!("{} :- {}.", self.atom_text(h), body.join(", ")),
            (None, _) => format!(":- {}.", body.join(", ")),
        }
    }
}

impl Default for GroundProgram {
    fn default() -> Self {
        GroundProgram::new()
    }
}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.export_text())
    }
}
