//! Brute-force reference implementations, used to test the translation, the
//! solver and the automata at small scale.
//!
//! [`enumerate_temporal_answer_sets`] works directly on prefixed temporal
//! literals. It only considers interpretations that repeat with the loop of
//! a k-loop action sequence: the candidate fixes states `0..=k`, state `k+1`
//! is a copy of the loop target `j`, and the reduct is instantiated at
//! prefixes `0..=k+1`. Everything past `k+1` repeats, so nothing is lost by
//! cutting there. Non-lasso sequences are out of reach by design.
//!
//! The remaining functions are small, deliberately naive cross-checks:
//! answer sets of ground programs by exhaustive enumeration, membership in
//! the language of a regular program by splitting words, and random
//! generators for domains, formulas, programs, traces and ground programs.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::bmc::BmcError;
use crate::ground::{translate, GroundAtom, GroundProgram, Rule};
use crate::solver::{solve, Exhaustion, SolveConfig};
use crate::syntax::{
    DomainDescription, ExtLiteral, FluentLiteral, Formula, Head, Law, LawKind, Prefix, Program, TemporalLiteral,
};
use crate::trace::{decode_partial, LassoTrace};

pub const MAX_FLUENTS: usize = 4;
pub const MAX_ACTIONS: usize = 4;
pub const MAX_K: u32 = 3;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("too large for enumeration: {fluents} fluents, {actions} actions, k = {k} (limits {MAX_FLUENTS}, {MAX_ACTIONS}, {MAX_K})")]
    Scale { fluents: usize, actions: usize, k: u32 },
    #[error(transparent)]
    Bmc(#[from] BmcError),
}

/// A loop-invariant partial temporal interpretation: the action sequence
/// `actions[0..=k]` followed forever by `actions[j..=k]`, and the literals
/// holding after each prefix. `states[s][i]` is `None` when neither
/// `fluents[i]` nor its negation is in the set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateSet {
    pub k: u32,
    pub loop_to: u32,
    pub actions: Vec<String>,
    pub states: Vec<Vec<Option<bool>>>,
}

impl CandidateSet {
    pub fn is_total(&self) -> bool {
        self.states.iter().flatten().all(Option::is_some)
    }

    /// The temporal model of a total candidate.
    pub fn to_trace(&self, fluents: &[String], alphabet: &[String]) -> Option<LassoTrace> {
        let valuation = self
            .states
            .iter()
            .map(|row| row.iter().copied().collect::<Option<Vec<bool>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(LassoTrace {
            k: self.k,
            loop_to: self.loop_to,
            actions: self.actions.clone(),
            fluents: fluents.to_vec(),
            valuation,
            alphabet: alphabet.to_vec(),
        })
    }

    pub fn from_trace(t: &LassoTrace) -> Self {
        CandidateSet {
            k: t.k,
            loop_to: t.loop_to,
            actions: t.actions.clone(),
            states: t.valuation.iter().map(|row| row.iter().map(|&v| Some(v)).collect()).collect(),
        }
    }

    fn succ(&self, s: usize) -> usize {
        if s < self.k as usize {
            s + 1
        } else {
            self.loop_to as usize
        }
    }
}

impl fmt::Display for CandidateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} loop {}:", self.actions.join(";"), self.loop_to)?;
        for row in &self.states {
            let cells: String = row
                .iter()
                .map(|v| match v {
                    Some(true) => '1',
                    Some(false) => '0',
                    None => '?',
                })
                .collect();
            write!(f, " {cells}")?;
        }
        Ok(())
    }
}

// Literal `l` over fluent `i` is bit `2i` when positive, `2i+1` when negative.
type Mask = u64;

fn bit(fluent: usize, positive: bool) -> Mask {
    1 << (2 * fluent + usize::from(!positive))
}

/// One law instantiated at one prefix, before the reduct.
#[derive(Clone, Debug)]
struct Instance {
    head: Option<(usize, Mask)>,
    pos: Vec<(usize, Mask)>,
    neg: Vec<(usize, Mask)>,
    /// Latest prefix mentioned.
    last: usize,
}

struct Enumerator<'a> {
    d: &'a DomainDescription,
    k: usize,
    /// Every consistent partial state.
    states: Vec<Mask>,
}

impl Enumerator<'_> {
    fn fluent(&self, name: &str) -> usize {
        self.d.fluents.iter().position(|f| f == name).expect("fluent declared")
    }

    fn lit(&self, p: usize, l: &FluentLiteral) -> (usize, Mask) {
        (p, bit(self.fluent(&l.name), l.positive))
    }

    /// Instances of every law at prefix `p`, where `action` is the action
    /// executed there. Laws made trivially true by the action sequence are
    /// left out, as are rules whose `not` is certainly false.
    fn instances(&self, p: usize, action: &str) -> Vec<Instance> {
        let mut out = Vec::new();
        'laws: for law in &self.d.laws {
            if law.kind == LawKind::InitialState && p != 0 {
                continue;
            }
            let head = match &law.head {
                Head::Literal(l) => Some(self.lit(p, l)),
                Head::Falsum => None,
                Head::NextEffect(l) => Some(self.lit(p + 1, l)),
                Head::ActionEffect(a, l) => {
                    if a != action {
                        continue;
                    }
                    l.as_ref().map(|l| self.lit(p + 1, l))
                }
            };
            let (mut pos, mut neg) = (Vec::new(), Vec::new());
            for ExtLiteral { negated, lit: TemporalLiteral { prefix, lit } } in &law.body {
                let at = match prefix {
                    Prefix::Now => p,
                    Prefix::Next => p + 1,
                    // `[b] l` holds when `b` is not executed here.
                    Prefix::After(b) if b != action => {
                        if *negated {
                            continue 'laws;
                        }
                        continue;
                    }
                    Prefix::After(_) => p + 1,
                };
                let x = self.lit(at, lit);
                if *negated {
                    neg.push(x);
                } else {
                    pos.push(x);
                }
            }
            let last = head.iter().chain(&pos).chain(&neg).map(|x| x.0).max().unwrap_or(p).max(p);
            out.push(Instance { head, pos, neg, last });
        }
        out
    }

    /// Least model of the reduct of `insts` with respect to `s`, over
    /// prefixes `0..s.len()`. `None` when `false` is derived.
    fn least_model(insts: &[&Instance], s: &[Mask]) -> Option<Vec<Mask>> {
        let kept: Vec<&&Instance> = insts.iter().filter(|r| r.neg.iter().all(|&(p, b)| s[p] & b == 0)).collect();
        let mut lm = vec![0 as Mask; s.len()];
        loop {
            let mut changed = false;
            for r in &kept {
                if !r.pos.iter().all(|&(p, b)| lm[p] & b != 0) {
                    continue;
                }
                match r.head {
                    None => return None,
                    Some((p, b)) if lm[p] & b == 0 => {
                        lm[p] |= b;
                        changed = true;
                    }
                    Some(_) => {}
                }
            }
            if !changed {
                return Some(lm);
            }
        }
    }

    fn run(&self, sigma: &[String], out: &mut Vec<CandidateSet>) {
        let mut insts: Vec<Instance> = Vec::new();
        for (p, a) in sigma.iter().enumerate() {
            insts.extend(self.instances(p, a));
        }
        let mut chosen = Vec::with_capacity(self.k + 2);
        self.extend(sigma, &insts, &mut chosen, out);
    }

    fn extend(&self, sigma: &[String], insts: &[Instance], chosen: &mut Vec<Mask>, out: &mut Vec<CandidateSet>) {
        let depth = chosen.len();
        if depth == self.k + 1 {
            self.close(sigma, insts, chosen, out);
            return;
        }
        for &st in &self.states {
            chosen.push(st);
            // Rules whose prefixes are all chosen already can only grow the
            // least model from here, so it must stay inside the candidate.
            let ready: Vec<&Instance> = insts.iter().filter(|r| r.last <= depth).collect();
            let ok = match Self::least_model(&ready, chosen) {
                Some(lm) => lm.iter().zip(chosen.iter()).all(|(l, s)| l & !s == 0),
                None => false,
            };
            if ok {
                self.extend(sigma, insts, chosen, out);
            }
            chosen.pop();
        }
    }

    fn close(&self, sigma: &[String], insts: &[Instance], chosen: &[Mask], out: &mut Vec<CandidateSet>) {
        let k = self.k;
        for j in 0..=k {
            let mut s = chosen.to_vec();
            s.push(chosen[j]);
            let tail = self.instances(k + 1, &sigma[j]);
            let all: Vec<&Instance> = insts.iter().chain(tail.iter()).filter(|r| r.last <= k + 1).collect();
            if Self::least_model(&all, &s).as_deref() == Some(&s[..]) {
                out.push(self.candidate(sigma, j, chosen));
            }
        }
    }

    fn candidate(&self, sigma: &[String], j: usize, chosen: &[Mask]) -> CandidateSet {
        let states = chosen
            .iter()
            .map(|&m| {
                (0..self.d.fluents.len())
                    .map(|i| {
                        if m & bit(i, true) != 0 {
                            Some(true)
                        } else if m & bit(i, false) != 0 {
                            Some(false)
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect();
        CandidateSet { k: self.k as u32, loop_to: j as u32, actions: sigma.to_vec(), states }
    }
}

fn guard(d: &DomainDescription, k: u32) -> Result<(), OracleError> {
    if d.fluents.len() > MAX_FLUENTS || d.actions.len() > MAX_ACTIONS || k > MAX_K {
        return Err(OracleError::Scale { fluents: d.fluents.len(), actions: d.actions.len(), k });
    }
    Ok(())
}

/// Every loop-invariant temporal answer set of the laws of `d` (expected
/// to be macro-expanded; temporal constraints are ignored) over k-loop
/// action sequences.
pub fn enumerate_temporal_answer_sets(d: &DomainDescription, k: u32) -> Result<Vec<CandidateSet>, OracleError> {
    guard(d, k)?;
    let n = d.fluents.len();
    let mut states = Vec::new();
    for code in 0..3usize.pow(n as u32) {
        let (mut m, mut c) = (0, code);
        for i in 0..n {
            match c % 3 {
                1 => m |= bit(i, true),
                2 => m |= bit(i, false),
                _ => {}
            }
            c /= 3;
        }
        states.push(m);
    }
    let e = Enumerator { d, k: k as usize, states };
    let mut out = Vec::new();
    let len = k as usize + 1;
    let mut idx = vec![0usize; len];
    if d.actions.is_empty() {
        return Ok(out);
    }
    loop {
        let sigma: Vec<String> = idx.iter().map(|&i| d.actions[i].clone()).collect();
        e.run(&sigma, &mut out);
        // Next action sequence, odometer style.
        let mut p = 0;
        while p < len {
            idx[p] += 1;
            if idx[p] < d.actions.len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
        if p == len {
            return Ok(out);
        }
    }
}

/// Checks that `c` satisfies every law of `d` under the satisfaction
/// clauses for prefixed literals, without any reduct.
pub fn satisfies_rules(d: &DomainDescription, c: &CandidateSet) -> bool {
    let value = |s: usize, l: &FluentLiteral| -> bool {
        let i = d.fluents.iter().position(|f| *f == l.name).expect("fluent declared");
        c.states[s][i] == Some(l.positive)
    };
    for p in 0..=c.k as usize {
        let (action, next) = (&c.actions[p], c.succ(p));
        let holds = |t: &TemporalLiteral| match &t.prefix {
            Prefix::Now => value(p, &t.lit),
            Prefix::Next => value(next, &t.lit),
            Prefix::After(b) => b != action || value(next, &t.lit),
        };
        for law in &d.laws {
            if law.kind == LawKind::InitialState && p != 0 {
                continue;
            }
            if !law.body.iter().all(|e| holds(&e.lit) != e.negated) {
                continue;
            }
            let ok = match &law.head {
                Head::Literal(l) => value(p, l),
                Head::Falsum => false,
                Head::NextEffect(l) => value(next, l),
                Head::ActionEffect(a, l) => a != action || l.as_ref().is_some_and(|l| value(next, l)),
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Temporal models of the answer sets of the translation of `d` at bound
/// `k`, with the number of answer sets they came from.
pub fn solver_candidates(d: &DomainDescription, k: u32) -> Result<(BTreeSet<CandidateSet>, usize), OracleError> {
    let g = translate(d, k);
    let out = solve(&g, &SolveConfig::all()).map_err(BmcError::from)?;
    if out.status == Exhaustion::Budget {
        return Err(BmcError::Budget { k }.into());
    }
    let mut set = BTreeSet::new();
    for m in &out.models {
        let (t, undefined) = decode_partial(&g, m).map_err(BmcError::from)?;
        let mut c = CandidateSet::from_trace(&t);
        for (s, f) in undefined {
            if s <= k {
                let i = g.fluents.iter().position(|x| *x == f).unwrap();
                c.states[s as usize][i] = None;
            }
        }
        set.insert(c);
    }
    Ok((set, out.models.len()))
}

/// Outcome of [`crosscheck_theorem1`].
#[derive(Clone, Debug)]
pub struct CrosscheckReport {
    pub oracle: BTreeSet<CandidateSet>,
    pub solver: BTreeSet<CandidateSet>,
    /// Answer sets of the translation, counted before decoding.
    pub solver_answer_sets: usize,
}

impl CrosscheckReport {
    pub fn only_oracle(&self) -> Vec<&CandidateSet> {
        self.oracle.difference(&self.solver).collect()
    }

    pub fn only_solver(&self) -> Vec<&CandidateSet> {
        self.solver.difference(&self.oracle).collect()
    }

    pub fn is_ok(&self) -> bool {
        self.oracle == self.solver && self.solver_answer_sets == self.solver.len()
    }
}

impl fmt::Display for CrosscheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "oracle {} models, translation {} models from {} answer sets",
            self.oracle.len(),
            self.solver.len(),
            self.solver_answer_sets
        )?;
        for c in self.only_oracle() {
            writeln!(f, "  oracle only: {c}")?;
        }
        for c in self.only_solver() {
            writeln!(f, "  translation only: {c}")?;
        }
        Ok(())
    }
}

/// Compares the temporal answer sets of `d` (macro-expanded) with the
/// decoded answer sets of its translation at bound `k`.
pub fn crosscheck_theorem1(d: &DomainDescription, k: u32) -> Result<CrosscheckReport, OracleError> {
    let oracle: BTreeSet<CandidateSet> = enumerate_temporal_answer_sets(d, k)?.into_iter().collect();
    let (solver, solver_answer_sets) = solver_candidates(d, k)?;
    Ok(CrosscheckReport { oracle, solver, solver_answer_sets })
}

/// A program with the trace `t` as facts and no laws, ready for
/// `attach_formula`.
pub fn fixed_trace_program(t: &LassoTrace) -> GroundProgram {
    let mut g = GroundProgram::new();
    g.k = t.k;
    g.actions = t.alphabet.clone();
    g.fluents = t.fluents.clone();
    for s in 0..=t.k {
        let occ = g.atom(GroundAtom::Occurs(t.actions[s as usize].clone(), s));
        g.add_rule(Rule::fact(occ));
        let n = g.atom(GroundAtom::Next(s, t.succ(s as usize) as u32));
        g.add_rule(Rule::fact(n));
        for (i, f) in t.fluents.iter().enumerate() {
            if t.valuation[s as usize][i] {
                let h = g.atom(GroundAtom::Holds(f.clone(), s));
                g.add_rule(Rule::fact(h));
            }
        }
    }
    g
}

// Ground programs over atoms `0..n` as bitmasks.

fn naive_least_model(rules: &[(Option<usize>, u32, u32)], m: u32) -> u32 {
    let mut lm = 0u32;
    loop {
        let before = lm;
        for &(h, pos, neg) in rules {
            if let Some(h) = h {
                if neg & m == 0 && pos & !lm == 0 {
                    lm |= 1 << h;
                }
            }
        }
        if lm == before {
            return lm;
        }
    }
}

/// Answer sets of `rules` over atoms `0..n` by trying all `2^n` sets.
pub fn brute_force_answer_sets(n: usize, rules: &[Rule]) -> Vec<BTreeSet<u32>> {
    assert!(n <= 24, "exhaustive enumeration over {n} atoms");
    let mask = |ids: &[u32]| ids.iter().fold(0u32, |m, &a| m | (1 << a));
    let rules: Vec<(Option<usize>, u32, u32)> =
        rules.iter().map(|r| (r.head.map(|h| h as usize), mask(&r.pos), mask(&r.neg))).collect();
    let mut out = Vec::new();
    for m in 0..(1u32 << n) {
        // A model first: cheap to test and rules out most sets.
        let model = rules.iter().all(|&(h, pos, neg)| {
            let body = pos & !m == 0 && neg & m == 0;
            !body || h.is_some_and(|h| m & (1 << h) != 0)
        });
        if model && naive_least_model(&rules, m) == m {
            out.push((0..n as u32).filter(|i| m & (1 << i) != 0).collect());
        }
    }
    out
}

/// Whether `word` is in the language of `p`, by trying every split.
pub fn in_language<S: AsRef<str>>(p: &Program, word: &[S]) -> bool {
    match p {
        Program::Action(_) | Program::Test(_) => word.len() == 1 && word[0].as_ref() == p.leaf_symbol().unwrap(),
        Program::Choice(a, b) => in_language(a, word) || in_language(b, word),
        Program::Seq(a, b) => (0..=word.len()).any(|i| in_language(a, &word[..i]) && in_language(b, &word[i..])),
        Program::Star(a) => {
            word.is_empty() || (1..=word.len()).any(|i| in_language(a, &word[..i]) && in_language(p, &word[i..]))
        }
    }
}

/// Every word of length at most `max_len` over `symbols`.
pub fn all_words(symbols: &[String], max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for s in symbols {
                let mut w2: Vec<String> = w.clone();
                w2.push(s.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

// Random generators.

/// Size parameters for [`random_domain`].
#[derive(Clone, Copy, Debug)]
pub struct DomainShape {
    pub fluents: usize,
    pub actions: usize,
    pub laws: usize,
    pub all_inertial: bool,
}

fn random_lit<R: Rng>(rng: &mut R, fluents: &[String]) -> FluentLiteral {
    let f = fluents.choose(rng).unwrap().clone();
    FluentLiteral { name: f, positive: rng.gen_bool(0.5) }
}

fn random_body<R: Rng>(rng: &mut R, fluents: &[String], max: usize) -> Vec<ExtLiteral> {
    (0..rng.gen_range(0..=max))
        .map(|_| {
            let t = TemporalLiteral::now(random_lit(rng, fluents));
            if rng.gen_bool(0.3) {
                ExtLiteral::not(t)
            } else {
                ExtLiteral::pos(t)
            }
        })
        .collect()
}

/// A random domain without temporal constraints. Fluents are `f1, f2, ...`
/// and actions `a1, a2, ...`.
pub fn random_domain<R: Rng>(rng: &mut R, shape: DomainShape) -> DomainDescription {
    let fluents: Vec<String> = (1..=shape.fluents).map(|i| format!("f{i}")).collect();
    let actions: Vec<String> = (1..=shape.actions).map(|i| format!("a{i}")).collect();
    let inertial = if shape.all_inertial {
        fluents.clone()
    } else {
        fluents.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
    };
    let mut d =
        DomainDescription { actions: actions.clone(), fluents: fluents.clone(), inertial, ..Default::default() };
    if fluents.is_empty() {
        return d;
    }
    for _ in 0..shape.laws {
        let a = actions.choose(rng).unwrap().clone();
        let l = random_lit(rng, &fluents);
        let law = match rng.gen_range(0..100) {
            0..=34 => Law::new(LawKind::Action, Head::ActionEffect(a, Some(l)), random_body(rng, &fluents, 2)),
            35..=44 => {
                // Nondeterministic effect: `[a] l if not [a] -l` and back.
                let c = l.complement();
                d.add_law(Law::new(
                    LawKind::Action,
                    Head::ActionEffect(a.clone(), Some(c.clone())),
                    vec![ExtLiteral::not(TemporalLiteral::after(a.clone(), l.clone()))],
                ));
                Law::new(
                    LawKind::Action,
                    Head::ActionEffect(a.clone(), Some(l)),
                    vec![ExtLiteral::not(TemporalLiteral::after(a, c))],
                )
            }
            45..=59 => Law::new(LawKind::StaticCausal, Head::Literal(l), random_body(rng, &fluents, 2)),
            60..=69 => Law::new(LawKind::DynamicCausal, Head::NextEffect(l), random_body(rng, &fluents, 2)),
            70..=84 => {
                let mut body = random_body(rng, &fluents, 1);
                body.push(ExtLiteral::pos(TemporalLiteral::now(l)));
                Law::new(LawKind::Precondition, Head::ActionEffect(a, None), body)
            }
            85..=94 => Law::new(LawKind::InitialState, Head::Literal(l), random_body(rng, &fluents, 1)),
            _ => {
                let mut body = random_body(rng, &fluents, 1);
                body.push(ExtLiteral::pos(TemporalLiteral::now(l)));
                Law::new(LawKind::StateConstraint, Head::Falsum, body)
            }
        };
        d.add_law(law);
    }
    d
}

/// A random regular program with at most `size` nodes over `symbols`.
pub fn random_program<R: Rng>(rng: &mut R, symbols: &[String], size: usize) -> Program {
    let leaf = |rng: &mut R| Program::act(symbols.choose(rng).unwrap().clone());
    if size <= 1 {
        return leaf(rng);
    }
    // A binary node needs room for two children.
    let ops = if size >= 3 { 4 } else { 2 };
    match rng.gen_range(0..ops) {
        0 => leaf(rng),
        1 => Program::star(random_program(rng, symbols, size - 1)),
        op => {
            let left = rng.gen_range(1..size - 1);
            let (a, b) = (random_program(rng, symbols, left), random_program(rng, symbols, size - 1 - left));
            if op == 2 {
                Program::seq(a, b)
            } else {
                Program::choice(a, b)
            }
        }
    }
}

/// A random formula with at most `size` nodes. Programs inside it count
/// as one node each and are at most three nodes themselves.
pub fn random_formula<R: Rng>(rng: &mut R, fluents: &[String], actions: &[String], size: usize) -> Formula {
    let atom = |rng: &mut R| {
        if fluents.is_empty() || rng.gen_bool(0.1) {
            Formula::True
        } else {
            Formula::lit(random_lit(rng, fluents))
        }
    };
    if size <= 1 {
        return atom(rng);
    }
    let prog = |rng: &mut R| random_program(rng, actions, 3);
    let unary = |rng: &mut R, sub: Formula| match rng.gen_range(0..6) {
        0 => Formula::not(sub),
        1 => Formula::next(sub),
        2 => Formula::eventually(sub),
        3 => Formula::always(sub),
        4 => Formula::diamond(prog(rng), sub),
        _ => Formula::boxed(prog(rng), sub),
    };
    if size == 2 || rng.gen_bool(0.4) {
        let sub = random_formula(rng, fluents, actions, size - 1);
        return unary(rng, sub);
    }
    let left = rng.gen_range(1..size - 1);
    let a = random_formula(rng, fluents, actions, left);
    let b = random_formula(rng, fluents, actions, size - 1 - left);
    match rng.gen_range(0..5) {
        0 => Formula::or(a, b),
        1 => Formula::and(a, b),
        2 => Formula::implies(a, b),
        3 => Formula::until(a, b),
        _ => Formula::until_prog(prog(rng), a, b),
    }
}

/// A random total lasso trace over states `0..=k`.
pub fn random_trace<R: Rng>(rng: &mut R, fluents: &[String], actions: &[String], k: u32) -> LassoTrace {
    LassoTrace {
        k,
        loop_to: rng.gen_range(0..=k),
        actions: (0..=k).map(|_| actions.choose(rng).unwrap().clone()).collect(),
        fluents: fluents.to_vec(),
        valuation: (0..=k).map(|_| fluents.iter().map(|_| rng.gen_bool(0.5)).collect()).collect(),
        alphabet: actions.to_vec(),
    }
}

/// A random normal program over atoms `0..n`, about one rule in eight a
/// constraint.
pub fn random_ground_program<R: Rng>(rng: &mut R, n: usize, rules: usize) -> Vec<Rule> {
    let atom = |rng: &mut R| rng.gen_range(0..n as u32);
    (0..rules)
        .map(|_| {
            let head = if rng.gen_bool(0.125) { None } else { Some(atom(rng)) };
            let pos = (0..rng.gen_range(0..=2)).map(|_| atom(rng)).collect();
            let neg = (0..rng.gen_range(0..=2)).map(|_| atom(rng)).collect();
            Rule::new(head, pos, neg)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{expand_with, parse_domain, ExpandOptions};

    fn only(opts: (bool, bool), src: &str) -> DomainDescription {
        expand_with(&parse_domain(src).unwrap(), ExpandOptions { completion: opts.0, dummy: opts.1 })
    }

    fn count(sets: &[CandidateSet], sigma: &[&str], j: u32) -> usize {
        sets.iter().filter(|c| c.loop_to == j && c.actions.iter().map(String::as_str).eq(sigma.iter().copied())).count()
    }

    #[test]
    fn even_loop_at_k0() {
        let d = only((true, false), "fluent f. action a. inertial f.");
        let sets = enumerate_temporal_answer_sets(&d, 0).unwrap();
        assert_eq!(sets.len(), 2);
        assert!(sets.iter().all(|c| c.is_total() && satisfies_rules(&d, c)));
    }

    #[test]
    fn completion_alone_leaves_later_states_empty() {
        // Nothing carries the initial state forward, so it cannot reappear at
        // k+1: loops back to 0 are rejected and later states stay empty.
        let d = only((true, false), "fluent f. fluent g. action a. action b.");
        assert!(enumerate_temporal_answer_sets(&d, 0).unwrap().is_empty());
        for k in 1..=2u32 {
            let sets = enumerate_temporal_answer_sets(&d, k).unwrap();
            assert_eq!(sets.len(), 4 * 2usize.pow(k + 1) * k as usize);
            assert!(sets.iter().all(|c| c.loop_to > 0 && c.states[1..].iter().flatten().all(Option::is_none)));
        }
    }

    #[test]
    fn action_law_with_completion_at_k1() {
        let d = only((true, false), "fluent f. action a. law [a] f.");
        let sets = enumerate_temporal_answer_sets(&d, 1).unwrap();
        // j = 0 forces state 0 to equal the post-state of `a`.
        assert_eq!(count(&sets, &["a", "a"], 0), 1);
        assert_eq!(count(&sets, &["a", "a"], 1), 2);
        assert!(sets.iter().all(|c| c.states[1] == vec![Some(true)]));
    }

    #[test]
    fn spin_pair_has_two_outcomes() {
        let src = "fluent loaded. action spin. law [spin] loaded if not [spin] -loaded. law [spin] -loaded if not [spin] loaded.";
        let d = only((true, false), src);
        let sets = enumerate_temporal_answer_sets(&d, 0).unwrap();
        assert_eq!(sets.len(), 2);
        let d = only((true, false), &format!("{src} inertial loaded."));
        let sets = enumerate_temporal_answer_sets(&d, 1).unwrap();
        // Any initial value, either outcome after the first spin.
        assert_eq!(count(&sets, &["spin", "spin"], 1), 4);
    }

    #[test]
    fn scale_guard() {
        let d = only((true, false), "fluent f. action a. action b. action c. action d. action e.");
        assert!(matches!(enumerate_temporal_answer_sets(&d, 1), Err(OracleError::Scale { .. })));
    }

    #[test]
    fn language_by_splitting() {
        let p = crate::syntax::parse_program("(a; b)* + c", &parse_domain("action a. action b. action c.").unwrap())
            .unwrap();
        assert!(in_language(&p, &["a", "b", "a", "b"]));
        assert!(in_language::<&str>(&p, &[]));
        assert!(!in_language(&p, &["a", "c"]));
        assert_eq!(all_words(&["x".into(), "y".into()], 2).len(), 7);
    }

    #[test]
    fn brute_force_even_loop() {
        // p :- not q.  q :- not p.
        let rules = vec![Rule::new(Some(0), vec![], vec![1]), Rule::new(Some(1), vec![], vec![0])];
        assert_eq!(brute_force_answer_sets(2, &rules).len(), 2);
    }
}
