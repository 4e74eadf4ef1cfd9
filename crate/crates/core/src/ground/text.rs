//! A small reader and naive grounder for ASP text in the DLV dialect.
//!
//! Supported: function terms, variables, integer ranges `a..b`, `+`,
//! comparisons, `#maxint`, default negation `not`, and strong negation written
//! either `-p` or `~p` (both read as `-p`). Integer arithmetic follows DLV and
//! fails outside `0..=#maxint`. This is enough to ground reference encodings
//! for comparison against exported programs; it is not a general solver front end.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error("line {line}: {message}")]
    Parse { line: u32, message: String },
    #[error("unsafe rule: {0}")]
    Unsafe(String),
    #[error("grounding produced more than {0} atoms")]
    TooLarge(usize),
}

/// A ground term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Val {
    Int(i64),
    Sym(String, Vec<Val>),
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Int(i) => write!(f, "{i}"),
            Val::Sym(n, args) if args.is_empty() => write!(f, "{n}"),
            Val::Sym(n, args) => {
                write!(f, "{n}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug)]
enum T {
    Int(i64),
    Var(String),
    Fn(String, Vec<T>),
    MaxInt,
    Add(Box<T>, Box<T>),
    Range(Box<T>, Box<T>),
}

#[derive(Clone, Debug)]
struct A {
    pred: String,
    args: Vec<T>,
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Clone, Debug)]
enum L {
    Pos(A),
    Not(A),
    Cmp(T, Op, T),
}

#[derive(Clone, Debug)]
struct R {
    head: Option<A>,
    body: Vec<L>,
    line: u32,
}

/// A parsed, non-ground program.
#[derive(Clone, Debug, Default)]
pub struct AspProgram {
    rules: Vec<R>,
    pub maxint: Option<i64>,
}

/// A ground rule with atoms rendered as text.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TextRule {
    pub head: Option<String>,
    pub pos: Vec<String>,
    pub neg: Vec<String>,
}

impl fmt::Display for TextRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut body: Vec<String> = self.pos.clone();
        body.extend(self.neg.iter().map(|a| format!("not {a}")));
        match (&self.head, body.is_empty()) {
            (Some(h), true) => write!(f, "{h}."),
            (Some(h), false) => write!(f, "{h} :- {}.", body.join(", ")),
            (None, _) => write!(f, ":- {}.", body.join(", ")),
        }
    }
}

/// Predicate of a rendered atom, including a leading `-`.
pub fn predicate_of(atom: &str) -> &str {
    atom.split('(').next().unwrap_or(atom)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Int(i64),
    P(&'static str),
}

fn lex(src: &str) -> Result<Vec<(Tok, u32)>, TextError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line) = (0, 1u32);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            if c.is_ascii_uppercase() || c == '_' {
                out.push((Tok::Var(s), line));
            } else {
                out.push((Tok::Ident(s), line));
            }
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().unwrap()), line));
        } else if c == '#' {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            if s != "#maxint" {
                return Err(TextError::Parse { line, message: format!("unsupported directive {s}") });
            }
            out.push((Tok::P("#maxint"), line));
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let p = match two.as_str() {
                ":-" => Some(":-"),
                ".." => Some(".."),
                "!=" => Some("!="),
                "<>" => Some("!="),
                "<=" => Some("<="),
                ">=" => Some(">="),
                _ => None,
            };
            if let Some(p) = p {
                out.push((Tok::P(p), line));
                i += 2;
                continue;
            }
            let p = match c {
                '(' => "(",
                ')' => ")",
                ',' => ",",
                '.' => ".",
                '<' => "<",
                '>' => ">",
                '=' => "=",
                '+' => "+",
                '-' => "-",
                '~' => "-",
                _ => return Err(TextError::Parse { line, message: format!("unexpected `{c}`") }),
            };
            out.push((Tok::P(p), line));
            i += 1;
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, u32)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }
    fn line(&self) -> u32 {
        self.toks.get(self.pos).or(self.toks.last()).map_or(0, |t| t.1)
    }
    fn err<X>(&self, m: &str) -> Result<X, TextError> {
        Err(TextError::Parse { line: self.line(), message: m.to_string() })
    }
    fn eat(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Some(Tok::P(q)) if *q == p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn expect(&mut self, p: &str) -> Result<(), TextError> {
        if self.eat(p) {
            Ok(())
        } else {
            self.err(&format!("expected `{p}`"))
        }
    }

    fn primary(&mut self) -> Result<T, TextError> {
        match self.peek().cloned() {
            Some(Tok::Int(i)) => {
                self.pos += 1;
                Ok(T::Int(i))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(T::Var(v))
            }
            Some(Tok::P("#maxint")) => {
                self.pos += 1;
                Ok(T::MaxInt)
            }
            Some(Tok::Ident(n)) => {
                self.pos += 1;
                let mut args = Vec::new();
                if self.eat("(") {
                    args.push(self.term()?);
                    while self.eat(",") {
                        args.push(self.term()?);
                    }
                    self.expect(")")?;
                }
                Ok(T::Fn(n, args))
            }
            _ => self.err("expected term"),
        }
    }

    fn term(&mut self) -> Result<T, TextError> {
        let mut t = self.primary()?;
        while self.eat("+") {
            t = T::Add(Box::new(t), Box::new(self.primary()?));
        }
        if self.eat("..") {
            let hi = self.term()?;
            t = T::Range(Box::new(t), Box::new(hi));
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<A, TextError> {
        let neg = self.eat("-");
        match self.primary()? {
            T::Fn(n, args) => Ok(A { pred: if neg { format!("-{n}") } else { n }, args }),
            _ => self.err("expected atom"),
        }
    }

    fn cmp_op(&mut self) -> Option<Op> {
        for (s, op) in [("=", Op::Eq), ("!=", Op::Ne), ("<=", Op::Le), (">=", Op::Ge), ("<", Op::Lt), (">", Op::Gt)] {
            if self.eat(s) {
                return Some(op);
            }
        }
        None
    }

    fn literal(&mut self) -> Result<L, TextError> {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == "not") {
            self.pos += 1;
            return Ok(L::Not(self.atom()?));
        }
        if matches!(self.peek(), Some(Tok::P("-"))) {
            return Ok(L::Pos(self.atom()?));
        }
        let t = self.term()?;
        if let Some(op) = self.cmp_op() {
            let rhs = self.term()?;
            return Ok(L::Cmp(t, op, rhs));
        }
        match t {
            T::Fn(pred, args) => Ok(L::Pos(A { pred, args })),
            _ => self.err("expected atom or comparison"),
        }
    }

    fn program(&mut self) -> Result<AspProgram, TextError> {
        let mut prog = AspProgram::default();
        while self.peek().is_some() {
            let line = self.line();
            if self.eat("#maxint") {
                self.expect("=")?;
                match self.peek().cloned() {
                    Some(Tok::Int(i)) => {
                        self.pos += 1;
                        prog.maxint = Some(i);
                    }
                    _ => return self.err("expected integer"),
                }
                self.expect(".")?;
                continue;
            }
            let head = if matches!(self.peek(), Some(Tok::P(":-"))) { None } else { Some(self.atom()?) };
            let mut body = Vec::new();
            if self.eat(":-") {
                body.push(self.literal()?);
                while self.eat(",") {
                    body.push(self.literal()?);
                }
            }
            self.expect(".")?;
            prog.rules.push(R { head, body, line });
        }
        Ok(prog)
    }
}

/// Parses DLV-style text.
pub fn parse(src: &str) -> Result<AspProgram, TextError> {
    Parser { toks: lex(src)?, pos: 0 }.program()
}

type Binding = Vec<(String, Val)>;

fn lookup<'a>(b: &'a Binding, v: &str) -> Option<&'a Val> {
    b.iter().find(|(n, _)| n == v).map(|(_, x)| x)
}

struct Grounder {
    maxint: i64,
    possible: HashMap<String, Vec<Vec<Val>>>,
    seen: HashSet<(String, Vec<Val>)>,
    limit: usize,
}

impl Grounder {
    fn eval(&self, t: &T, b: &Binding) -> Option<Val> {
        match t {
            T::Int(i) => Some(Val::Int(*i)),
            T::Var(v) => lookup(b, v).cloned(),
            T::MaxInt => Some(Val::Int(self.maxint)),
            T::Fn(n, args) => {
                let vals: Option<Vec<Val>> = args.iter().map(|a| self.eval(a, b)).collect();
                Some(Val::Sym(n.clone(), vals?))
            }
            T::Add(x, y) => match (self.eval(x, b)?, self.eval(y, b)?) {
                (Val::Int(x), Val::Int(y)) if x + y <= self.maxint => Some(Val::Int(x + y)),
                _ => None,
            },
            T::Range(..) => None,
        }
    }

    fn bound(t: &T, b: &Binding) -> bool {
        match t {
            T::Int(_) | T::MaxInt => true,
            T::Var(v) => lookup(b, v).is_some(),
            T::Fn(_, args) => args.iter().all(|a| Self::bound(a, b)),
            T::Add(x, y) | T::Range(x, y) => Self::bound(x, b) && Self::bound(y, b),
        }
    }

    fn unify(&self, t: &T, v: &Val, b: &mut Binding) -> bool {
        match t {
            T::Var(name) => match lookup(b, name) {
                Some(x) => x == v,
                None => {
                    b.push((name.clone(), v.clone()));
                    true
                }
            },
            T::Fn(n, args) => match v {
                Val::Sym(m, vals) if m == n && vals.len() == args.len() => {
                    args.iter().zip(vals).all(|(a, x)| self.unify(a, x, b))
                }
                _ => false,
            },
            other => self.eval(other, b).as_ref() == Some(v),
        }
    }

    fn key(pred: &str, arity: usize) -> String {
        format!("{pred}/{arity}")
    }

    /// Enumerates bindings satisfying the positive atoms and comparisons of `body`.
    fn join(
        &self,
        body: &[L],
        done: &mut Vec<bool>,
        b: &Binding,
        out: &mut dyn FnMut(&Binding),
    ) -> Result<(), TextError> {
        for (i, l) in body.iter().enumerate() {
            if done[i] {
                continue;
            }
            if let L::Cmp(x, op, y) = l {
                let (bx, by) = (Self::bound(x, b), Self::bound(y, b));
                if bx && by {
                    let (Some(vx), Some(vy)) = (self.eval(x, b), self.eval(y, b)) else { return Ok(()) };
                    let ok = match op {
                        Op::Eq => vx == vy,
                        Op::Ne => vx != vy,
                        Op::Lt => vx < vy,
                        Op::Le => vx <= vy,
                        Op::Gt => vx > vy,
                        Op::Ge => vx >= vy,
                    };
                    if !ok {
                        return Ok(());
                    }
                    done[i] = true;
                    let r = self.join(body, done, b, out);
                    done[i] = false;
                    return r;
                }
                let assign = match (op, x, y) {
                    (Op::Eq, T::Var(v), rhs) if !bx && by => Some((v, rhs)),
                    (Op::Eq, lhs, T::Var(v)) if !by && bx => Some((v, lhs)),
                    _ => None,
                };
                if let Some((v, e)) = assign {
                    let Some(val) = self.eval(e, b) else { return Ok(()) };
                    let mut nb = b.clone();
                    nb.push((v.clone(), val));
                    done[i] = true;
                    let r = self.join(body, done, &nb, out);
                    done[i] = false;
                    return r;
                }
            }
        }
        for (i, l) in body.iter().enumerate() {
            if done[i] {
                continue;
            }
            if let L::Pos(a) = l {
                done[i] = true;
                if let Some(tuples) = self.possible.get(&Self::key(&a.pred, a.args.len())) {
                    for tup in tuples {
                        let mut nb = b.clone();
                        if a.args.iter().zip(tup).all(|(t, v)| self.unify(t, v, &mut nb)) {
                            self.join(body, done, &nb, out)?;
                        }
                    }
                }
                done[i] = false;
                return Ok(());
            }
        }
        if body.iter().enumerate().any(|(i, l)| !done[i] && matches!(l, L::Cmp(..))) {
            return Err(TextError::Unsafe("comparison over unbound variables".into()));
        }
        out(b);
        Ok(())
    }

    /// Ground instances of an atom; ranges in arguments expand.
    fn instances(&self, a: &A, b: &Binding) -> Vec<Vec<Val>> {
        let mut acc: Vec<Vec<Val>> = vec![vec![]];
        for t in &a.args {
            let choices: Vec<Val> = match t {
                T::Range(lo, hi) => match (self.eval(lo, b), self.eval(hi, b)) {
                    (Some(Val::Int(lo)), Some(Val::Int(hi))) => (lo..=hi).map(Val::Int).collect(),
                    _ => vec![],
                },
                other => self.eval(other, b).into_iter().collect(),
            };
            acc = acc
                .into_iter()
                .flat_map(|p| {
                    choices.iter().map(move |c| {
                        let mut q = p.clone();
                        q.push(c.clone());
                        q
                    })
                })
                .collect();
        }
        acc
    }

    fn add(&mut self, pred: &str, tup: Vec<Val>) -> Result<bool, TextError> {
        let k = (pred.to_string(), tup.clone());
        if self.seen.contains(&k) {
            return Ok(false);
        }
        if self.seen.len() >= self.limit {
            return Err(TextError::TooLarge(self.limit));
        }
        self.seen.insert(k);
        self.possible.entry(Self::key(pred, tup.len())).or_default().push(tup);
        Ok(true)
    }
}

fn render(pred: &str, tup: &[Val]) -> String {
    if tup.is_empty() {
        pred.to_string()
    } else {
        let args: Vec<String> = tup.iter().map(|v| v.to_string()).collect();
        format!("{pred}({})", args.join(","))
    }
}

/// Grounds a program: possible atoms are computed ignoring default negation,
/// then every rule is instantiated over them. Rules are returned sorted.
pub fn ground(p: &AspProgram) -> Result<Vec<TextRule>, TextError> {
    let mut g =
        Grounder { maxint: p.maxint.unwrap_or(0), possible: HashMap::new(), seen: HashSet::new(), limit: 1_000_000 };
    loop {
        let mut changed = false;
        for r in &p.rules {
            let Some(h) = &r.head else { continue };
            let positive: Vec<L> = r.body.iter().filter(|l| !matches!(l, L::Not(_))).cloned().collect();
            let mut heads = Vec::new();
            let mut done = vec![false; positive.len()];
            g.join(&positive, &mut done, &Vec::new(), &mut |b| heads.extend(g.instances(h, b)))
                .map_err(|e| annotate(e, r.line))?;
            for tup in heads {
                changed |= g.add(&h.pred, tup)?;
            }
        }
        if !changed {
            break;
        }
    }

    let mut out = BTreeSet::new();
    for r in &p.rules {
        let mut done = vec![false; r.body.len()];
        let mut err = None;
        g.join(&r.body, &mut done, &Vec::new(), &mut |b| {
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for l in &r.body {
                match l {
                    L::Pos(a) => pos.push(render(&a.pred, &g.instances(a, b)[0])),
                    L::Not(a) => match g.instances(a, b).first() {
                        Some(tup) => neg.push(render(&a.pred, tup)),
                        None => err = Some(TextError::Unsafe(format!("line {}: unbound negative literal", r.line))),
                    },
                    L::Cmp(..) => {}
                }
            }
            pos.sort();
            pos.dedup();
            neg.sort();
            neg.dedup();
            match &r.head {
                Some(h) => {
                    for tup in g.instances(h, b) {
                        out.insert(TextRule { head: Some(render(&h.pred, &tup)), pos: pos.clone(), neg: neg.clone() });
                    }
                }
                None => {
                    out.insert(TextRule { head: None, pos: pos.clone(), neg: neg.clone() });
                }
            }
        })
        .map_err(|e| annotate(e, r.line))?;
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(out.into_iter().collect())
}

fn annotate(e: TextError, line: u32) -> TextError {
    match e {
        TextError::Unsafe(m) => TextError::Unsafe(format!("line {line}: {m}")),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_arithmetic() {
        let p = parse("#maxint=3.\nstate(0..#maxint).\nnext(S,SN) :- state(S), SN=S+1.").unwrap();
        let rules = ground(&p).unwrap();
        let nexts: Vec<String> =
            rules.iter().filter_map(|r| r.head.clone()).filter(|h| h.starts_with("next")).collect();
        assert_eq!(nexts, vec!["next(0,1)", "next(1,2)", "next(2,3)"]);
    }

    #[test]
    fn strong_negation_spellings_agree() {
        let p = parse("a(1). -b(X) :- a(X). c :- ~b(1), not d.").unwrap();
        let rules = ground(&p).unwrap();
        assert!(rules.iter().any(|r| r.to_string() == "c :- -b(1), not d."));
    }

    #[test]
    fn nested_patterns() {
        let p = parse("f(neg(or(x,y))). f(X) :- f(neg(X)). f(A) :- f(or(A,B)).").unwrap();
        let heads: BTreeSet<String> = ground(&p).unwrap().into_iter().filter_map(|r| r.head).collect();
        assert!(heads.contains("f(or(x,y))"));
        assert!(heads.contains("f(x)"));
    }
}
