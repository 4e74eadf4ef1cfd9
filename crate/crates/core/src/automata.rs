//! Regular programs compiled to epsilon-free NFAs.
//!
//! The construction uses partial derivatives: a state is a continuation, the
//! list of program subterms still to be executed. Every state is reached by a
//! real action, so there are no epsilon moves, and the number of states is at
//! most one more than the number of action occurrences in the program.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::Program;

/// Longest word accepted by [`language_upto`].
pub const MAX_ENUM_LEN: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomataError {
    #[error("word length limit {requested} exceeds the maximum of {max}")]
    LengthLimit { requested: usize, max: usize },
}

/// An epsilon-free NFA over action names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    /// Outgoing transitions per state, in symbol order.
    pub trans: Vec<Vec<(String, usize)>>,
    pub finals: Vec<bool>,
    /// Action names in order of first occurrence in the program.
    pub alphabet: Vec<String>,
}

impl Nfa {
    pub fn num_states(&self) -> usize {
        self.finals.len()
    }

    pub fn successors<'a>(&'a self, q: usize, sym: &'a str) -> impl Iterator<Item = usize> + 'a {
        self.trans[q].iter().filter(move |(s, _)| s == sym).map(|(_, t)| *t)
    }

    /// Text listing of the automaton as `trans`/`final` facts. States print as `q1..`.
    pub fn dump(&self, name: &str) -> String {
        let mut out = String::new();
        for (q, edges) in self.trans.iter().enumerate() {
            for (a, t) in edges {
                out.push_str(&format!("trans({name},q{},{a},q{}).\n", q + 1, t + 1));
            }
        }
        for (q, f) in self.finals.iter().enumerate() {
            if *f {
                out.push_str(&format!("final({name},q{}).\n", q + 1));
            }
        }
        out
    }
}

/// An automaton together with a current state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomatonHandle {
    pub nfa: Arc<Nfa>,
    pub state: usize,
}

impl AutomatonHandle {
    pub fn at(&self, state: usize) -> AutomatonHandle {
        AutomatonHandle { nfa: self.nfa.clone(), state }
    }

    pub fn is_final(&self) -> bool {
        self.nfa.finals[self.state]
    }
}

#[derive(Clone, Debug)]
enum Node {
    Sym(String),
    Seq(usize, usize),
    Choice(usize, usize),
    Star(usize),
}

struct Arena {
    nodes: Vec<Node>,
    nullable: Vec<bool>,
}

impl Arena {
    fn build(p: &Program, arena: &mut Arena) -> usize {
        let (node, nullable) = match p {
            Program::Action(_) | Program::Test(_) => (Node::Sym(p.leaf_symbol().unwrap()), false),
            Program::Seq(a, b) => {
                let (x, y) = (Self::build(a, arena), Self::build(b, arena));
                (Node::Seq(x, y), arena.nullable[x] && arena.nullable[y])
            }
            Program::Choice(a, b) => {
                let (x, y) = (Self::build(a, arena), Self::build(b, arena));
                (Node::Choice(x, y), arena.nullable[x] || arena.nullable[y])
            }
            Program::Star(a) => (Node::Star(Self::build(a, arena)), true),
        };
        arena.nodes.push(node);
        arena.nullable.push(nullable);
        arena.nodes.len() - 1
    }

    fn push_unique(out: &mut Vec<Vec<usize>>, v: Vec<usize>) {
        if !out.contains(&v) {
            out.push(v);
        }
    }

    /// Partial derivatives of a single subterm.
    fn deriv_node(&self, n: usize, sym: &str) -> Vec<Vec<usize>> {
        match &self.nodes[n] {
            Node::Sym(s) => {
                if s == sym {
                    vec![vec![]]
                } else {
                    vec![]
                }
            }
            Node::Choice(a, b) => {
                let mut out = self.deriv_node(*a, sym);
                for t in self.deriv_node(*b, sym) {
                    Self::push_unique(&mut out, t);
                }
                out
            }
            Node::Seq(a, b) => self.deriv_list(&[*a, *b], sym),
            Node::Star(a) => self
                .deriv_node(*a, sym)
                .into_iter()
                .map(|mut t| {
                    t.push(n);
                    t
                })
                .collect(),
        }
    }

    /// Partial derivatives of a continuation.
    fn deriv_list(&self, list: &[usize], sym: &str) -> Vec<Vec<usize>> {
        let Some((&head, rest)) = list.split_first() else {
            return vec![];
        };
        let mut out = Vec::new();
        for mut t in self.deriv_node(head, sym) {
            t.extend_from_slice(rest);
            Self::push_unique(&mut out, t);
        }
        if self.nullable[head] {
            for t in self.deriv_list(rest, sym) {
                Self::push_unique(&mut out, t);
            }
        }
        out
    }
}

/// Compiles a program. The start state is 0.
pub fn compile(p: &Program) -> AutomatonHandle {
    let mut arena = Arena { nodes: Vec::new(), nullable: Vec::new() };
    let root = Arena::build(p, &mut arena);
    let alphabet = p.symbols();

    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut states: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    ids.insert(vec![root], 0);
    states.push(vec![root]);
    queue.push_back(0usize);
    let mut trans: Vec<Vec<(String, usize)>> = vec![Vec::new()];

    while let Some(q) = queue.pop_front() {
        let cont = states[q].clone();
        for sym in &alphabet {
            for t in arena.deriv_list(&cont, sym) {
                let id = match ids.get(&t) {
                    Some(&id) => id,
                    None => {
                        let id = states.len();
                        ids.insert(t.clone(), id);
                        states.push(t);
                        trans.push(Vec::new());
                        queue.push_back(id);
                        id
                    }
                };
                trans[q].push((sym.clone(), id));
            }
        }
    }
    let finals = states.iter().map(|c| c.iter().all(|&n| arena.nullable[n])).collect();
    AutomatonHandle { nfa: Arc::new(Nfa { trans, finals, alphabet }), state: 0 }
}

/// Word acceptance from the handle's state.
pub fn accepts<S: AsRef<str>>(h: &AutomatonHandle, word: &[S]) -> bool {
    let n = h.nfa.num_states();
    let mut cur = vec![false; n];
    cur[h.state] = true;
    for sym in word {
        let mut next = vec![false; n];
        for q in (0..n).filter(|&q| cur[q]) {
            for t in h.nfa.successors(q, sym.as_ref()) {
                next[t] = true;
            }
        }
        cur = next;
    }
    (0..n).any(|q| cur[q] && h.nfa.finals[q])
}

/// All accepted words of length at most `max_len`.
pub fn language_upto(h: &AutomatonHandle, max_len: usize) -> Result<BTreeSet<Vec<String>>, AutomataError> {
    if max_len > MAX_ENUM_LEN {
        return Err(AutomataError::LengthLimit { requested: max_len, max: MAX_ENUM_LEN });
    }
    let nfa = &h.nfa;
    let mut out = BTreeSet::new();
    // Breadth-first over (word, set of current states).
    let mut start = BTreeSet::new();
    start.insert(h.state);
    let mut layer: Vec<(Vec<String>, BTreeSet<usize>)> = vec![(Vec::new(), start)];
    for len in 0..=max_len {
        let mut next_layer = Vec::new();
        for (word, set) in &layer {
            if set.iter().any(|&q| nfa.finals[q]) {
                out.insert(word.clone());
            }
            if len == max_len {
                continue;
            }
            for sym in &nfa.alphabet {
                let succ: BTreeSet<usize> = set.iter().flat_map(|&q| nfa.successors(q, sym)).collect();
                if !succ.is_empty() {
                    let mut w = word.clone();
                    w.push(sym.clone());
                    next_layer.push((w, succ));
                }
            }
        }
        layer = next_layer;
    }
    Ok(out)
}

/// Handles for every state reachable from `h`, starting with `h` itself.
pub fn reachable_handles(h: &AutomatonHandle) -> Vec<AutomatonHandle> {
    let mut seen = vec![false; h.nfa.num_states()];
    let mut order = vec![h.state];
    seen[h.state] = true;
    let mut i = 0;
    while i < order.len() {
        let q = order[i];
        for (_, t) in &h.nfa.trans[q] {
            if !seen[*t] {
                seen[*t] = true;
                order.push(*t);
            }
        }
        i += 1;
    }
    order.into_iter().map(|q| h.at(q)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Program {
        Program::act(s)
    }

    fn mail_program() -> Program {
        Program::seq(
            Program::seq(
                Program::seq(a("sense_mail(a)"), a("sense_mail(b)")),
                Program::choice(Program::choice(a("deliver(a)"), a("deliver(b)")), a("wait")),
            ),
            a("begin"),
        )
    }

    #[test]
    fn mail_program_has_five_states() {
        let h = compile(&mail_program());
        assert_eq!(h.nfa.num_states(), 5);
        let dump = h.nfa.dump("aut");
        for line in [
            "trans(aut,q1,sense_mail(a),q2).",
            "trans(aut,q2,sense_mail(b),q3).",
            "trans(aut,q3,deliver(a),q4).",
            "trans(aut,q3,deliver(b),q4).",
            "trans(aut,q3,wait,q4).",
            "trans(aut,q4,begin,q5).",
            "final(aut,q5).",
        ] {
            assert!(dump.contains(line), "missing {line} in\n{dump}");
        }
        assert_eq!(dump.lines().count(), 7);
    }

    #[test]
    fn mail_program_accepts_cycle() {
        let h = compile(&mail_program());
        assert!(accepts(&h, &["sense_mail(a)", "sense_mail(b)", "wait", "begin"]));
        assert!(!accepts(&h, &["sense_mail(a)", "wait", "begin"]));
    }

    #[test]
    fn star_of_single_action_is_one_state() {
        let h = compile(&Program::star(a("a")));
        assert_eq!(h.nfa.num_states(), 1);
        assert!(h.is_final());
        assert!(accepts::<&str>(&h, &[]));
        assert!(accepts(&h, &["a", "a", "a"]));
    }

    #[test]
    fn language_limit() {
        let h = compile(&Program::star(a("a")));
        assert!(language_upto(&h, 13).is_err());
        let l = language_upto(&h, 3).unwrap();
        assert_eq!(l.len(), 4);
    }

    #[test]
    fn reachable_from_start_covers_all_states() {
        let h = compile(&mail_program());
        assert_eq!(reachable_handles(&h).len(), 5);
        assert_eq!(reachable_handles(&h.at(3)).len(), 2);
    }
}
