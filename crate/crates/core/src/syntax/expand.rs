//! Macro expansion: persistency, completion, test actions and the dummy idiom.

use super::ast::*;

pub const DUMMY: &str = "dummy";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpandOptions {
    /// Add the completion laws `f <- not -f` and `-f <- not f` for the initial state.
    pub completion: bool,
    /// Add the `dummy` action that lets a finite run idle forever.
    pub dummy: bool,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions { completion: true, dummy: false }
    }
}

/// Expansion with default options.
pub fn expand_macros(d: &DomainDescription) -> DomainDescription {
    expand_with(d, ExpandOptions::default())
}

/// Adds the generated laws that are not already present. Idempotent.
pub fn expand_with(d: &DomainDescription, opts: ExpandOptions) -> DomainDescription {
    let mut out = d.clone();
    let now = |l: FluentLiteral| ExtLiteral::pos(TemporalLiteral::now(l));
    let not_now = |l: FluentLiteral| ExtLiteral::not(TemporalLiteral::now(l));

    for f in &d.inertial {
        for l in [FluentLiteral::pos(f.clone()), FluentLiteral::neg(f.clone())] {
            out.add_law(Law::new(
                LawKind::DynamicCausal,
                Head::NextEffect(l.clone()),
                vec![now(l.clone()), ExtLiteral::not(TemporalLiteral::next(l.complement()))],
            ));
        }
    }

    if opts.completion {
        for f in &d.fluents {
            for l in [FluentLiteral::pos(f.clone()), FluentLiteral::neg(f.clone())] {
                out.add_law(Law::new(LawKind::InitialState, Head::Literal(l.clone()), vec![not_now(l.complement())]));
            }
        }
    }

    for t in &d.tests {
        let a = test_symbol(t);
        out.add_law(Law::new(LawKind::Precondition, Head::ActionEffect(a.clone(), None), vec![not_now(t.clone())]));
        for f in &d.fluents {
            for l in [FluentLiteral::pos(f.clone()), FluentLiteral::neg(f.clone())] {
                out.add_law(Law::new(LawKind::Action, Head::ActionEffect(a.clone(), Some(l.clone())), vec![now(l)]));
            }
        }
    }

    if opts.dummy {
        if !out.has_action(DUMMY) {
            out.actions.push(DUMMY.to_string());
        }
        let dummy = Program::act(DUMMY);
        out.add_constraint(Formula::eventually(Formula::diamond(dummy.clone(), Formula::True)));
        out.add_constraint(Formula::always(Formula::boxed(dummy.clone(), Formula::diamond(dummy, Formula::True))));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_domain;

    #[test]
    fn test_action_generates_precondition_and_frame() {
        let d = parse_domain(
            "action wait. fluent alive. fluent loaded. fluent in_sight. fluent frightened. test in_sight?.",
        )
        .unwrap();
        let e = expand_with(&d, ExpandOptions { completion: false, dummy: false });
        let pre = e.laws.iter().filter(|l| l.kind == LawKind::Precondition).count();
        let frame = e.laws.iter().filter(|l| l.kind == LawKind::Action).count();
        assert_eq!((pre, frame), (1, 8));
    }

    #[test]
    fn expansion_is_idempotent() {
        let d = parse_domain("action a. fluent f. inertial f. test -f?.").unwrap();
        let opts = ExpandOptions { completion: true, dummy: true };
        let once = expand_with(&d, opts);
        assert_eq!(expand_with(&once, opts), once);
    }
}
