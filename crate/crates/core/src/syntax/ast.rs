//! Abstract syntax for domain descriptions, regular programs and DLTL formulas.

use std::fmt;

/// Source position (1-based line and column).
#[derive(Clone, Copy, Debug, Default, Eq, PartialEq, Hash)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A fluent name with a sign. `-f` is the classical negation of `f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FluentLiteral {
    pub name: String,
    pub positive: bool,
}

impl FluentLiteral {
    pub fn pos(name: impl Into<String>) -> Self {
        FluentLiteral { name: name.into(), positive: true }
    }

    pub fn neg(name: impl Into<String>) -> Self {
        FluentLiteral { name: name.into(), positive: false }
    }

    pub fn complement(&self) -> Self {
        FluentLiteral { name: self.name.clone(), positive: !self.positive }
    }
}

impl fmt::Display for FluentLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.name)
        } else {
            write!(f, "-{}", self.name)
        }
    }
}

/// Name of the test action `l?`.
pub fn test_symbol(l: &FluentLiteral) -> String {
    format!("{l}?")
}

/// Which state a literal in a law refers to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Prefix {
    /// The current state.
    Now,
    /// `[a] l`: the state after executing `a`.
    After(String),
    /// `next l`: the next state, whatever the action.
    Next,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TemporalLiteral {
    pub prefix: Prefix,
    pub lit: FluentLiteral,
}

impl TemporalLiteral {
    pub fn now(lit: FluentLiteral) -> Self {
        TemporalLiteral { prefix: Prefix::Now, lit }
    }
    pub fn after(action: impl Into<String>, lit: FluentLiteral) -> Self {
        TemporalLiteral { prefix: Prefix::After(action.into()), lit }
    }
    pub fn next(lit: FluentLiteral) -> Self {
        TemporalLiteral { prefix: Prefix::Next, lit }
    }
}

impl fmt::Display for TemporalLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.prefix {
            Prefix::Now => write!(f, "{}", self.lit),
            Prefix::After(a) => write!(f, "[{a}] {}", self.lit),
            Prefix::Next => write!(f, "next {}", self.lit),
        }
    }
}

/// A temporal literal, possibly under default negation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtLiteral {
    pub negated: bool,
    pub lit: TemporalLiteral,
}

impl ExtLiteral {
    pub fn pos(lit: TemporalLiteral) -> Self {
        ExtLiteral { negated: false, lit }
    }
    pub fn not(lit: TemporalLiteral) -> Self {
        ExtLiteral { negated: true, lit }
    }
}

impl fmt::Display for ExtLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "not {}", self.lit)
        } else {
            write!(f, "{}", self.lit)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LawKind {
    /// `[a] l <- body`
    Action,
    /// `l <- body`, holding in every state.
    StaticCausal,
    /// `next l <- body`
    DynamicCausal,
    /// `[a] false <- body`
    Precondition,
    /// Rule over the initial state only.
    InitialState,
    /// `false <- body` in every state.
    StateConstraint,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Head {
    Literal(FluentLiteral),
    Falsum,
    /// `[a] l`, or `[a] false` when the literal is absent.
    ActionEffect(String, Option<FluentLiteral>),
    NextEffect(FluentLiteral),
}

#[derive(Clone, Debug)]
pub struct Law {
    pub kind: LawKind,
    pub head: Head,
    pub body: Vec<ExtLiteral>,
    pub span: Span,
}

impl PartialEq for Law {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.head == other.head && self.body == other.body
    }
}
impl Eq for Law {}

impl Law {
    pub fn new(kind: LawKind, head: Head, body: Vec<ExtLiteral>) -> Self {
        Law { kind, head, body, span: Span::default() }
    }
}

/// Regular program over action names. Test actions are kept as their literal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Program {
    Action(String),
    Test(FluentLiteral),
    Seq(Box<Program>, Box<Program>),
    Choice(Box<Program>, Box<Program>),
    Star(Box<Program>),
}

impl Program {
    pub fn act(a: impl Into<String>) -> Self {
        Program::Action(a.into())
    }
    pub fn seq(p: Program, q: Program) -> Self {
        Program::Seq(Box::new(p), Box::new(q))
    }
    pub fn choice(p: Program, q: Program) -> Self {
        Program::Choice(Box::new(p), Box::new(q))
    }
    pub fn star(p: Program) -> Self {
        Program::Star(Box::new(p))
    }

    /// Right-nested choice over the given actions. Panics on an empty slice.
    pub fn any_of(actions: &[String]) -> Self {
        let mut it = actions.iter().rev();
        let mut p = Program::act(it.next().expect("non-empty alphabet").clone());
        for a in it {
            p = Program::choice(Program::act(a.clone()), p);
        }
        p
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        match self {
            Program::Action(_) | Program::Test(_) => 1,
            Program::Seq(p, q) | Program::Choice(p, q) => 1 + p.size() + q.size(),
            Program::Star(p) => 1 + p.size(),
        }
    }

    /// The action name carried by a leaf, if this is one.
    pub fn leaf_symbol(&self) -> Option<String> {
        match self {
            Program::Action(a) => Some(a.clone()),
            Program::Test(l) => Some(test_symbol(l)),
            _ => None,
        }
    }

    /// Action names in order of first occurrence.
    pub fn symbols(&self) -> Vec<String> {
        fn go(p: &Program, out: &mut Vec<String>) {
            match p {
                Program::Action(_) | Program::Test(_) => {
                    let s = p.leaf_symbol().unwrap();
                    if !out.contains(&s) {
                        out.push(s);
                    }
                }
                Program::Seq(a, b) | Program::Choice(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Program::Star(a) => go(a, out),
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Program::Action(a) => write!(f, "{a}"),
            Program::Test(l) => write!(f, "{l}?"),
            Program::Seq(p, q) => write!(f, "({p}; {q})"),
            Program::Choice(p, q) => write!(f, "({p} + {q})"),
            Program::Star(p) => write!(f, "{p}*"),
        }
    }
}

/// DLTL formula. Derived connectives are kept for printing; see [`Formula::to_core`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Lit(FluentLiteral),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// Plain LTL until, i.e. until indexed by the program `Σ*`.
    Until(Box<Formula>, Box<Formula>),
    UntilProg(Program, Box<Formula>, Box<Formula>),
    Diamond(Program, Box<Formula>),
    Box(Program, Box<Formula>),
    Next(Box<Formula>),
    Eventually(Box<Formula>),
    Always(Box<Formula>),
}

impl Formula {
    pub fn lit(l: FluentLiteral) -> Self {
        Formula::Lit(l)
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Self {
        Formula::Not(Box::new(a))
    }
    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }
    pub fn until_prog(p: Program, a: Formula, b: Formula) -> Self {
        Formula::UntilProg(p, Box::new(a), Box::new(b))
    }
    pub fn diamond(p: Program, a: Formula) -> Self {
        Formula::Diamond(p, Box::new(a))
    }
    pub fn boxed(p: Program, a: Formula) -> Self {
        Formula::Box(p, Box::new(a))
    }
    pub fn next(a: Formula) -> Self {
        Formula::Next(Box::new(a))
    }
    pub fn eventually(a: Formula) -> Self {
        Formula::Eventually(Box::new(a))
    }
    pub fn always(a: Formula) -> Self {
        Formula::Always(Box::new(a))
    }

    /// Number of syntax nodes, counting program nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Lit(_) => 1,
            Formula::Not(a) | Formula::Next(a) | Formula::Eventually(a) | Formula::Always(a) => 1 + a.size(),
            Formula::Or(a, b) | Formula::And(a, b) | Formula::Implies(a, b) | Formula::Until(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::UntilProg(p, a, b) => 1 + p.size() + a.size() + b.size(),
            Formula::Diamond(p, a) | Formula::Box(p, a) => 1 + p.size() + a.size(),
        }
    }

    /// Negation with the obvious simplifications (`~~a`, `~G a`, `~F a`).
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Not(a) => (**a).clone(),
            Formula::Always(a) => Formula::eventually(a.negate()),
            Formula::Eventually(a) => Formula::always(a.negate()),
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            other => Formula::not(other.clone()),
        }
    }

    /// Rewrites into the core connectives `true`, positive fluents, `~`, `|`
    /// and program-indexed until. `sigma` is the action alphabet used for `U`,
    /// `X`, `F` and `G`.
    pub fn to_core(&self, sigma: &[String]) -> Formula {
        let any = || Program::any_of(sigma);
        let all = || Program::star(Program::any_of(sigma));
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::not(Formula::True),
            Formula::Lit(l) if l.positive => Formula::Lit(l.clone()),
            Formula::Lit(l) => Formula::not(Formula::Lit(l.complement())),
            Formula::Not(a) => Formula::not(a.to_core(sigma)),
            Formula::Or(a, b) => Formula::or(a.to_core(sigma), b.to_core(sigma)),
            Formula::And(a, b) => {
                Formula::not(Formula::or(Formula::not(a.to_core(sigma)), Formula::not(b.to_core(sigma))))
            }
            Formula::Implies(a, b) => Formula::or(Formula::not(a.to_core(sigma)), b.to_core(sigma)),
            Formula::Until(a, b) => Formula::until_prog(all(), a.to_core(sigma), b.to_core(sigma)),
            Formula::UntilProg(p, a, b) => Formula::until_prog(p.clone(), a.to_core(sigma), b.to_core(sigma)),
            Formula::Diamond(p, a) => Formula::until_prog(p.clone(), Formula::True, a.to_core(sigma)),
            Formula::Box(p, a) => {
                Formula::not(Formula::until_prog(p.clone(), Formula::True, Formula::not(a.to_core(sigma))))
            }
            Formula::Next(a) => Formula::until_prog(any(), Formula::True, a.to_core(sigma)),
            Formula::Eventually(a) => Formula::until_prog(all(), Formula::True, a.to_core(sigma)),
            Formula::Always(a) => {
                Formula::not(Formula::until_prog(all(), Formula::True, Formula::not(a.to_core(sigma))))
            }
        }
    }

    /// True when only core connectives occur.
    pub fn is_core(&self) -> bool {
        match self {
            Formula::True => true,
            Formula::Lit(l) => l.positive,
            Formula::Not(a) => a.is_core(),
            Formula::Or(a, b) | Formula::UntilProg(_, a, b) => a.is_core() && b.is_core(),
            _ => false,
        }
    }

    /// Fluent names in order of first occurrence.
    pub fn fluents(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Lit(l) = f {
                if !out.contains(&l.name) {
                    out.push(l.name.clone());
                }
            }
        });
        out
    }

    /// Programs indexing modalities, outermost first.
    pub fn programs(&self) -> Vec<Program> {
        let mut out = Vec::new();
        self.visit(&mut |f| match f {
            Formula::UntilProg(p, _, _) | Formula::Diamond(p, _) | Formula::Box(p, _) => out.push(p.clone()),
            _ => {}
        });
        out
    }

    fn visit(&self, cb: &mut dyn FnMut(&Formula)) {
        cb(self);
        match self {
            Formula::True | Formula::False | Formula::Lit(_) => {}
            Formula::Not(a)
            | Formula::Next(a)
            | Formula::Eventually(a)
            | Formula::Always(a)
            | Formula::Diamond(_, a)
            | Formula::Box(_, a) => a.visit(cb),
            Formula::Or(a, b)
            | Formula::And(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b)
            | Formula::UntilProg(_, a, b) => {
                a.visit(cb);
                b.visit(cb);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Lit(l) => write!(f, "{l}"),
            Formula::Not(a) => write!(f, "~{a}"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Until(a, b) => write!(f, "({a} U {b})"),
            Formula::UntilProg(p, a, b) => write!(f, "({a} U{{{p}}} {b})"),
            Formula::Diamond(p, a) => write!(f, "<{p}> {a}"),
            Formula::Box(p, a) => write!(f, "[{p}] {a}"),
            Formula::Next(a) => write!(f, "X {a}"),
            Formula::Eventually(a) => write!(f, "F {a}"),
            Formula::Always(a) => write!(f, "G {a}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub formula: Formula,
    pub span: Span,
}

impl PartialEq for Constraint {
    fn eq(&self, other: &Self) -> bool {
        self.formula == other.formula
    }
}
impl Eq for Constraint {}

/// A domain description: signature, laws and temporal constraints.
///
/// Test actions declared with `test l?` appear in `actions` under the name
/// `l?` and in `tests` as their literal.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DomainDescription {
    pub actions: Vec<String>,
    pub fluents: Vec<String>,
    pub laws: Vec<Law>,
    pub inertial: Vec<String>,
    pub constraints: Vec<Constraint>,
    pub tests: Vec<FluentLiteral>,
}

impl DomainDescription {
    pub fn has_action(&self, a: &str) -> bool {
        self.actions.iter().any(|x| x == a)
    }

    pub fn has_fluent(&self, f: &str) -> bool {
        self.fluents.iter().any(|x| x == f)
    }

    pub fn is_test_action(&self, a: &str) -> bool {
        self.tests.iter().any(|l| test_symbol(l) == a)
    }

    pub fn add_law(&mut self, law: Law) {
        if !self.laws.contains(&law) {
            self.laws.push(law);
        }
    }

    pub fn add_constraint(&mut self, formula: Formula) {
        let c = Constraint { formula, span: Span::default() };
        if !self.constraints.contains(&c) {
            self.constraints.push(c);
        }
    }

    /// True when every fluent is inertial.
    pub fn all_inertial(&self) -> bool {
        self.fluents.iter().all(|f| self.inertial.contains(f))
    }
}
