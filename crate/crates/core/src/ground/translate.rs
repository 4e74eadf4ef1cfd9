use crate::syntax::{DomainDescription, ExtLiteral, FluentLiteral, Formula, Head, LawKind, Prefix};

use super::closure::Term;
use super::{AtomId, GroundAtom, GroundError, GroundProgram, Mode, Rule, TermId};

fn lit_atom(l: &FluentLiteral, s: u32) -> GroundAtom {
    if l.positive {
        GroundAtom::Holds(l.name.clone(), s)
    } else {
        GroundAtom::NHolds(l.name.clone(), s)
    }
}

/// Grounds the laws of `d` (expected to be macro-expanded) over states `0..=k`.
/// Temporal constraints are not included; attach them with
/// [`GroundProgram::attach_constraints`].
pub fn translate(d: &DomainDescription, k: u32) -> GroundProgram {
    let mut g = GroundProgram::new();
    g.k = k;
    g.actions = d.actions.clone();
    g.fluents = d.fluents.clone();

    // Choice atoms first, in state order: they double as decision hints.
    for s in 0..=k {
        for a in &d.actions {
            let id = g.atom(GroundAtom::Occurs(a.clone(), s));
            g.hints.push(id);
        }
    }
    for j in 0..=k {
        let id = g.atom(GroundAtom::Next(k, j));
        g.hints.push(id);
    }

    // Exactly one action per state.
    for s in 0..=k {
        for a in &d.actions {
            let occ = g.atom(GroundAtom::Occurs(a.clone(), s));
            let nocc = g.atom(GroundAtom::NOccurs(a.clone(), s));
            g.add_rule(Rule::new(Some(occ), vec![], vec![nocc]));
            g.add_rule(Rule::new(None, vec![occ, nocc], vec![]));
            for b in d.actions.iter().filter(|b| *b != a) {
                let nb = g.atom(GroundAtom::NOccurs(b.clone(), s));
                g.add_rule(Rule::new(Some(nb), vec![occ], vec![]));
            }
        }
    }

    // Successor relation: a line 0..k closed by one back edge k -> j.
    for i in 0..k {
        let n = g.atom(GroundAtom::Next(i, i + 1));
        g.add_rule(Rule::fact(n));
    }
    for j in 0..=k {
        let next = g.atom(GroundAtom::Next(k, j));
        let nnext = g.atom(GroundAtom::NNext(k, j));
        for jj in (0..=k).filter(|&jj| jj != j) {
            let other = g.atom(GroundAtom::Next(k, jj));
            g.add_rule(Rule::new(Some(nnext), vec![other], vec![]));
        }
        g.add_rule(Rule::new(Some(next), vec![], vec![nnext]));
        let eq = g.atom(GroundAtom::EqLast(j));
        g.add_rule(Rule::new(None, vec![next], vec![eq]));
        g.add_rule(Rule::new(None, vec![next, nnext], vec![]));
    }

    // The state after k must agree with the loop target.
    for s in 0..=k {
        let diff = g.atom(GroundAtom::DiffLast(s));
        for f in &d.fluents {
            let (h, nh) = (g.atom(GroundAtom::Holds(f.clone(), s)), g.atom(GroundAtom::NHolds(f.clone(), s)));
            let (hl, nhl) = (g.atom(GroundAtom::Holds(f.clone(), k + 1)), g.atom(GroundAtom::NHolds(f.clone(), k + 1)));
            g.add_rule(Rule::new(Some(diff), vec![h, nhl], vec![]));
            g.add_rule(Rule::new(Some(diff), vec![nh, hl], vec![]));
        }
        let eq = g.atom(GroundAtom::EqLast(s));
        g.add_rule(Rule::new(Some(eq), vec![], vec![diff]));
    }

    // Classical negation: f and -f never hold together.
    for s in 0..=k + 1 {
        for f in &d.fluents {
            let (h, nh) = (g.atom(GroundAtom::Holds(f.clone(), s)), g.atom(GroundAtom::NHolds(f.clone(), s)));
            g.add_rule(Rule::new(None, vec![h, nh], vec![]));
        }
    }

    for law in &d.laws {
        let states: Vec<u32> = match law.kind {
            LawKind::Action | LawKind::DynamicCausal | LawKind::Precondition => (0..=k).collect(),
            LawKind::StaticCausal | LawKind::StateConstraint => (0..=k + 1).collect(),
            LawKind::InitialState => vec![0],
        };
        for s in states {
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            let head = match &law.head {
                Head::Literal(l) => Some(g.atom(lit_atom(l, s))),
                Head::Falsum => None,
                Head::NextEffect(l) => Some(g.atom(lit_atom(l, s + 1))),
                Head::ActionEffect(a, l) => {
                    pos.push(g.atom(GroundAtom::Occurs(a.clone(), s)));
                    l.as_ref().map(|l| g.atom(lit_atom(l, s + 1)))
                }
            };
            for ExtLiteral { negated, lit } in &law.body {
                let at = match lit.prefix {
                    Prefix::Now => s,
                    Prefix::After(_) | Prefix::Next => s + 1,
                };
                let id = g.atom(lit_atom(&lit.lit, at));
                if *negated {
                    neg.push(id);
                } else {
                    pos.push(id);
                }
            }
            g.add_rule(Rule::new(head, pos, neg));
        }
    }
    g
}

impl GroundProgram {
    fn succ(&self, s: u32) -> Vec<u32> {
        if s < self.k {
            vec![s + 1]
        } else {
            (0..=self.k).collect()
        }
    }

    fn check_symbols(&self, f: &Formula) -> Result<(), GroundError> {
        for fl in f.fluents() {
            if !self.fluents.contains(&fl) {
                return Err(GroundError::Undeclared(fl));
            }
        }
        for p in f.programs() {
            for a in p.symbols() {
                if !self.actions.contains(&a) {
                    return Err(GroundError::Undeclared(a));
                }
            }
        }
        Ok(())
    }

    /// Adds `sat` rules for every closure entry that does not have them yet.
    fn ground_closure(&mut self) {
        while self.grounded_terms < self.closure.len() {
            let id = self.grounded_terms as TermId;
            self.grounded_terms += 1;
            for s in 0..=self.k {
                self.ground_term(id, s);
            }
        }
    }

    fn sat(&mut self, t: TermId, s: u32) -> AtomId {
        self.atom(GroundAtom::Sat(t, s))
    }

    fn ground_term(&mut self, id: TermId, s: u32) {
        let head = Some(self.sat(id, s));
        let term = self.closure.term(id).clone();
        let succ = self.succ(s);
        match term {
            Term::True => self.add_rule(Rule::new(head, vec![], vec![])),
            Term::Fluent(f) => {
                let h = self.atom(GroundAtom::Holds(f, s));
                self.add_rule(Rule::new(head, vec![h], vec![]));
            }
            Term::Probe => {
                let u = self.atom(GroundAtom::UndefinedFluent(s));
                self.add_rule(Rule::new(head, vec![u], vec![]));
            }
            Term::Neg(a) => {
                let a = self.sat(a, s);
                self.add_rule(Rule::new(head, vec![], vec![a]));
            }
            Term::Or(a, b) => {
                let (a, b) = (self.sat(a, s), self.sat(b, s));
                self.add_rule(Rule::new(head, vec![a], vec![]));
                self.add_rule(Rule::new(head, vec![b], vec![]));
            }
            Term::And(a, b) => {
                let (a, b) = (self.sat(a, s), self.sat(b, s));
                self.add_rule(Rule::new(head, vec![a, b], vec![]));
            }
            Term::Impl(a, b) => {
                let (a, b) = (self.sat(a, s), self.sat(b, s));
                self.add_rule(Rule::new(head, vec![], vec![a]));
                self.add_rule(Rule::new(head, vec![b], vec![]));
            }
            Term::Until { aut, q, lhs, rhs } => {
                let nfa = self.closure.automata()[aut as usize].clone();
                if nfa.finals[q as usize] {
                    let b = self.sat(rhs, s);
                    self.add_rule(Rule::new(head, vec![b], vec![]));
                }
                let l = self.sat(lhs, s);
                for (sym, q2) in &nfa.trans[q as usize] {
                    let next_term = self
                        .closure
                        .lookup(&Term::Until { aut, q: *q2 as u32, lhs, rhs })
                        .expect("until closure is complete");
                    let occ = self.atom(GroundAtom::Occurs(sym.clone(), s));
                    for &s2 in &succ {
                        let n = self.atom(GroundAtom::Next(s, s2));
                        let u = self.sat(next_term, s2);
                        self.add_rule(Rule::new(head, vec![l, occ, n, u], vec![]));
                    }
                }
            }
            Term::Ev(a) => {
                let here = self.sat(a, s);
                self.add_rule(Rule::new(head, vec![here], vec![]));
                for &s2 in &succ {
                    let n = self.atom(GroundAtom::Next(s, s2));
                    let later = self.sat(id, s2);
                    self.add_rule(Rule::new(head, vec![n, later], vec![]));
                }
            }
            Term::Diamond(sym, a) => {
                let occ = self.atom(GroundAtom::Occurs(sym, s));
                for &s2 in &succ {
                    let n = self.atom(GroundAtom::Next(s, s2));
                    let x = self.sat(a, s2);
                    self.add_rule(Rule::new(head, vec![occ, n, x], vec![]));
                }
            }
            Term::Box(sym, a) => {
                for b in self.actions.clone().into_iter().filter(|b| *b != sym) {
                    let occ = self.atom(GroundAtom::Occurs(b, s));
                    self.add_rule(Rule::new(head, vec![occ], vec![]));
                }
                let occ = self.atom(GroundAtom::Occurs(sym, s));
                for &s2 in &succ {
                    let n = self.atom(GroundAtom::Next(s, s2));
                    let x = self.sat(a, s2);
                    self.add_rule(Rule::new(head, vec![occ, n, x], vec![]));
                }
            }
            Term::Next(a) => {
                for &s2 in &succ {
                    let n = self.atom(GroundAtom::Next(s, s2));
                    let x = self.sat(a, s2);
                    self.add_rule(Rule::new(head, vec![n, x], vec![]));
                }
            }
        }
    }

    fn attach_term(&mut self, t: TermId, mode: Mode) {
        self.ground_closure();
        let root = self.sat(t, 0);
        match mode {
            Mode::Require => self.add_rule(Rule::new(None, vec![], vec![root])),
            Mode::Forbid => self.add_rule(Rule::new(None, vec![root], vec![])),
        }
    }

    /// Grounds `f` over the program's states and constrains its value at state 0.
    pub fn attach_formula(&mut self, f: &Formula, mode: Mode) -> Result<TermId, GroundError> {
        self.check_symbols(f)?;
        let actions = self.actions.clone();
        let t = self.closure.add_formula(f, &actions)?;
        self.attach_term(t, mode);
        Ok(t)
    }

    /// Requires every temporal constraint of `d`.
    pub fn attach_constraints(&mut self, d: &DomainDescription) -> Result<(), GroundError> {
        for c in &d.constraints {
            self.attach_formula(&c.formula, Mode::Require)?;
        }
        Ok(())
    }

    /// Adds the well-definedness probe and requires that it fires: answer sets
    /// of the result are runs in which some fluent is undefined.
    pub fn attach_probe(&mut self) -> Result<TermId, GroundError> {
        let k = self.k;
        for s in 0..=k + 1 {
            let u = self.atom(GroundAtom::UndefinedFluent(s));
            for f in self.fluents.clone() {
                let h = self.atom(GroundAtom::Holds(f.clone(), s));
                let nh = self.atom(GroundAtom::NHolds(f, s));
                self.add_rule(Rule::new(Some(u), vec![], vec![h, nh]));
            }
        }
        // The state after k is not visited by the lasso; report it at k.
        let (uk, ul) = (self.atom(GroundAtom::UndefinedFluent(k)), self.atom(GroundAtom::UndefinedFluent(k + 1)));
        self.add_rule(Rule::new(Some(uk), vec![ul], vec![]));
        let t = self.closure.add_probe()?;
        self.attach_term(t, Mode::Require);
        Ok(t)
    }
}
