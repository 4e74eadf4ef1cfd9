use super::ast::*;
use super::lexer::{is_keyword, tokenize, Tok};
use super::SyntaxError;

#[derive(Clone, Debug)]
enum Ref {
    Action(String),
    Fluent(String),
    Test(FluentLiteral),
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    refs: Vec<(Ref, Span)>,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        Ok(Parser { toks: tokenize(src)?, pos: 0, refs: Vec::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(SyntaxError::Syntax {
            span: self.span(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<Span> {
        if *self.peek() == t {
            Ok(self.bump().1)
        } else {
            self.err(&[&t.describe()])
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn name(&mut self) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                let span = self.bump().1;
                Ok((s, span))
            }
            _ => self.err(&["identifier"]),
        }
    }

    /// `["-"] name`
    fn literal(&mut self) -> PResult<FluentLiteral> {
        let positive = !self.eat(&Tok::Minus);
        let (name, span) = self.name()?;
        self.refs.push((Ref::Fluent(name.clone()), span));
        Ok(FluentLiteral { name, positive })
    }

    /// An action name inside `[..]`: plain, or a test `l?`.
    fn action_ref(&mut self) -> PResult<String> {
        let span = self.span();
        if *self.peek() == Tok::Minus {
            let l = self.literal()?;
            self.expect(Tok::Question)?;
            let s = test_symbol(&l);
            self.refs.push((Ref::Action(s.clone()), span));
            return Ok(s);
        }
        let (name, span) = self.name()?;
        if self.eat(&Tok::Question) {
            self.refs.push((Ref::Fluent(name.clone()), span));
            let s = test_symbol(&FluentLiteral::pos(name));
            self.refs.push((Ref::Action(s.clone()), span));
            Ok(s)
        } else {
            self.refs.push((Ref::Action(name.clone()), span));
            Ok(name)
        }
    }

    fn ext_literal(&mut self) -> PResult<ExtLiteral> {
        let negated = self.eat_kw("not");
        let lit = if self.eat_kw("next") {
            TemporalLiteral::next(self.literal()?)
        } else if self.eat(&Tok::LBrack) {
            let a = self.action_ref()?;
            self.expect(Tok::RBrack)?;
            TemporalLiteral::after(a, self.literal()?)
        } else {
            TemporalLiteral::now(self.literal()?)
        };
        Ok(ExtLiteral { negated, lit })
    }

    fn condition(&mut self) -> PResult<Vec<ExtLiteral>> {
        let mut body = Vec::new();
        if self.eat_kw("if") {
            body.push(self.ext_literal()?);
            while self.eat(&Tok::Comma) {
                body.push(self.ext_literal()?);
            }
        }
        Ok(body)
    }

    fn domain(&mut self) -> PResult<DomainDescription> {
        let mut d = DomainDescription::default();
        loop {
            let span = self.span();
            let kw = match self.peek().clone() {
                Tok::Eof => break,
                Tok::Ident(s) => s,
                _ => return self.err(&["statement"]),
            };
            match kw.as_str() {
                "action" => {
                    self.bump();
                    let (n, _) = self.name()?;
                    if !d.actions.contains(&n) {
                        d.actions.push(n);
                    }
                }
                "fluent" => {
                    self.bump();
                    let (n, _) = self.name()?;
                    if !d.fluents.contains(&n) {
                        d.fluents.push(n);
                    }
                }
                "inertial" => {
                    self.bump();
                    let (n, s) = self.name()?;
                    self.refs.push((Ref::Fluent(n.clone()), s));
                    if !d.inertial.contains(&n) {
                        d.inertial.push(n);
                    }
                }
                "test" => {
                    self.bump();
                    let l = self.literal()?;
                    self.expect(Tok::Question)?;
                    let s = test_symbol(&l);
                    if !d.tests.contains(&l) {
                        d.tests.push(l);
                    }
                    if !d.actions.contains(&s) {
                        d.actions.push(s);
                    }
                }
                "law" => {
                    self.bump();
                    self.expect(Tok::LBrack)?;
                    let a = self.action_ref()?;
                    self.expect(Tok::RBrack)?;
                    let law = if self.eat_kw("false") {
                        let body = self.condition()?;
                        Law { kind: LawKind::Precondition, head: Head::ActionEffect(a, None), body, span }
                    } else {
                        let l = self.literal()?;
                        let body = self.condition()?;
                        Law { kind: LawKind::Action, head: Head::ActionEffect(a, Some(l)), body, span }
                    };
                    d.laws.push(law);
                }
                "impossible" => {
                    self.bump();
                    self.expect(Tok::LBrack)?;
                    let a = self.action_ref()?;
                    self.expect(Tok::RBrack)?;
                    let body = self.condition()?;
                    d.laws.push(Law { kind: LawKind::Precondition, head: Head::ActionEffect(a, None), body, span });
                }
                "caused" => {
                    self.bump();
                    let law = if self.eat_kw("next") {
                        let l = self.literal()?;
                        Law { kind: LawKind::DynamicCausal, head: Head::NextEffect(l), body: self.condition()?, span }
                    } else if self.eat_kw("false") {
                        Law { kind: LawKind::StateConstraint, head: Head::Falsum, body: self.condition()?, span }
                    } else {
                        let l = self.literal()?;
                        Law { kind: LawKind::StaticCausal, head: Head::Literal(l), body: self.condition()?, span }
                    };
                    d.laws.push(law);
                }
                "initially" => {
                    self.bump();
                    let head = if self.eat_kw("false") { Head::Falsum } else { Head::Literal(self.literal()?) };
                    let body = self.condition()?;
                    d.laws.push(Law { kind: LawKind::InitialState, head, body, span });
                }
                "constraint" => {
                    self.bump();
                    let formula = self.formula()?;
                    d.constraints.push(Constraint { formula, span });
                }
                _ => return self.err(&["statement keyword"]),
            }
            self.expect(Tok::Dot)?;
        }
        Ok(d)
    }

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut f = self.until()?;
        while self.eat(&Tok::Amp) {
            f = Formula::and(f, self.until()?);
        }
        Ok(f)
    }

    fn until(&mut self) -> PResult<Formula> {
        let lhs = self.unary()?;
        if self.eat_kw("U") {
            let rhs = self.until()?;
            return Ok(Formula::until(lhs, rhs));
        }
        if self.eat(&Tok::UBrace) {
            let p = self.program()?;
            self.expect(Tok::RBrace)?;
            let rhs = self.until()?;
            return Ok(Formula::until_prog(p, lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat_kw("X") {
            return Ok(Formula::next(self.unary()?));
        }
        if self.eat_kw("F") {
            return Ok(Formula::eventually(self.unary()?));
        }
        if self.eat_kw("G") {
            return Ok(Formula::always(self.unary()?));
        }
        if self.eat(&Tok::Lt) {
            let p = self.program()?;
            self.expect(Tok::Gt)?;
            return Ok(Formula::diamond(p, self.unary()?));
        }
        if self.eat(&Tok::LBrack) {
            let p = self.program()?;
            self.expect(Tok::RBrack)?;
            return Ok(Formula::boxed(p, self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Formula> {
        if self.eat_kw("true") {
            return Ok(Formula::True);
        }
        if self.eat_kw("false") {
            return Ok(Formula::False);
        }
        if self.eat(&Tok::LParen) {
            let f = self.formula()?;
            self.expect(Tok::RParen)?;
            return Ok(f);
        }
        match self.peek() {
            Tok::Minus => Ok(Formula::Lit(self.literal()?)),
            Tok::Ident(s) if !is_keyword(s) => Ok(Formula::Lit(self.literal()?)),
            _ => self.err(&["formula"]),
        }
    }

    fn program(&mut self) -> PResult<Program> {
        let mut p = self.sequence()?;
        while self.eat(&Tok::Plus) {
            p = Program::choice(p, self.sequence()?);
        }
        Ok(p)
    }

    fn sequence(&mut self) -> PResult<Program> {
        let mut p = self.postfix()?;
        while self.eat(&Tok::Semi) {
            p = Program::seq(p, self.postfix()?);
        }
        Ok(p)
    }

    fn postfix(&mut self) -> PResult<Program> {
        let mut p = self.primary_program()?;
        while self.eat(&Tok::Star) {
            p = Program::star(p);
        }
        Ok(p)
    }

    fn primary_program(&mut self) -> PResult<Program> {
        if self.eat(&Tok::LParen) {
            let p = self.program()?;
            self.expect(Tok::RParen)?;
            return Ok(p);
        }
        let span = self.span();
        let is_test = match (self.peek(), self.peek_at(1), self.peek_at(2)) {
            (Tok::Minus, _, Tok::Question) => true,
            (Tok::Ident(_), Tok::Question, _) => true,
            (Tok::Minus, _, _) => return self.err(&["test action"]),
            _ => false,
        };
        if is_test {
            let l = self.literal()?;
            self.expect(Tok::Question)?;
            self.refs.push((Ref::Test(l.clone()), span));
            return Ok(Program::Test(l));
        }
        let (name, span) = self.name()?;
        self.refs.push((Ref::Action(name.clone()), span));
        Ok(Program::Action(name))
    }

    fn check_refs(&self, d: &DomainDescription) -> PResult<()> {
        for (r, span) in &self.refs {
            match r {
                Ref::Action(a) if !d.has_action(a) => {
                    return Err(SyntaxError::Undeclared { span: *span, kind: "action", name: a.clone() })
                }
                Ref::Fluent(f) if !d.has_fluent(f) => {
                    return Err(SyntaxError::Undeclared { span: *span, kind: "fluent", name: f.clone() })
                }
                Ref::Test(l) if !d.is_test_action(&test_symbol(l)) => {
                    return Err(SyntaxError::Undeclared { span: *span, kind: "test action", name: test_symbol(l) })
                }
                _ => {}
            }
        }
        Ok(())
    }
}

fn check_shape(law: &Law) -> PResult<()> {
    let bad = |msg: &str| Err(SyntaxError::LawShape { span: law.span, message: msg.to_string() });
    let all_now = law.body.iter().all(|e| e.lit.prefix == Prefix::Now);
    match (&law.kind, &law.head) {
        (LawKind::Action, Head::ActionEffect(a, Some(_))) => {
            for e in &law.body {
                match &e.lit.prefix {
                    Prefix::Now => {}
                    Prefix::After(b) if b == a => {}
                    Prefix::After(b) => return bad(&format!("action law for `{a}` refers to `[{b}]` in its body")),
                    Prefix::Next => return bad("`next` is only allowed in dynamic causal laws"),
                }
            }
            Ok(())
        }
        (LawKind::Precondition, Head::ActionEffect(_, None)) if all_now => Ok(()),
        (LawKind::Precondition, Head::ActionEffect(_, None)) => {
            bad("precondition bodies may only refer to the current state")
        }
        (LawKind::DynamicCausal, Head::NextEffect(_)) => {
            if law.body.iter().any(|e| matches!(e.lit.prefix, Prefix::After(_))) {
                bad("dynamic causal laws may not use `[a]` prefixes")
            } else {
                Ok(())
            }
        }
        (LawKind::StaticCausal, Head::Literal(_))
        | (LawKind::StateConstraint, Head::Falsum)
        | (LawKind::InitialState, Head::Literal(_))
        | (LawKind::InitialState, Head::Falsum) => {
            if all_now {
                Ok(())
            } else {
                bad("static and initial laws may only refer to the current state")
            }
        }
        _ => bad("head does not match the law kind"),
    }
}

/// Checks law shapes, signature disjointness and non-emptiness.
pub fn validate(d: &DomainDescription) -> PResult<()> {
    if d.actions.is_empty() {
        return Err(SyntaxError::EmptyDomain);
    }
    if let Some(x) = d.actions.iter().find(|a| d.fluents.contains(a)) {
        return Err(SyntaxError::Overlap { name: x.clone() });
    }
    for law in &d.laws {
        check_shape(law)?;
    }
    Ok(())
}

/// Parses a domain description.
pub fn parse_domain(src: &str) -> PResult<DomainDescription> {
    let mut p = Parser::new(src)?;
    let d = p.domain()?;
    p.check_refs(&d)?;
    validate(&d)?;
    Ok(d)
}

/// Parses a formula, resolving names against `d`.
pub fn parse_formula(src: &str, d: &DomainDescription) -> PResult<Formula> {
    let mut p = Parser::new(src)?;
    let f = p.formula()?;
    p.expect(Tok::Eof)?;
    p.check_refs(d)?;
    Ok(f)
}

/// Parses a regular program, resolving names against `d`.
pub fn parse_program(src: &str, d: &DomainDescription) -> PResult<Program> {
    let mut p = Parser::new(src)?;
    let prog = p.program()?;
    p.expect(Tok::Eof)?;
    p.check_refs(d)?;
    Ok(prog)
}
