//! Surface language: domain descriptions, regular programs and DLTL formulas.
//!
//! A domain file is a sequence of `.`-terminated statements:
//!
//! ```text
//! action load.  fluent loaded.  inertial loaded.  test in_sight?.
//! law [load] loaded.                 % action law
//! law [spin] loaded if not [spin] -loaded.
//! impossible [load] if loaded.       % precondition
//! caused frightened if in_sight.     % static law
//! caused next f if g.                % dynamic law
//! caused false if f, g.              % state constraint
//! initially -loaded.
//! constraint G (loaded -> F ~loaded).
//! ```
//!
//! Formula precedence, loosest first: `->` (right), `|`, `&`, `U` / `U{π}`
//! (right), then the prefix operators `~ X F G <π> [π]`. In programs `+` is
//! loosest, then `;`, then postfix `*`.

mod ast;
mod expand;
mod lexer;
mod parser;
mod printer;

pub use ast::*;
pub use expand::{expand_macros, expand_with, ExpandOptions, DUMMY};
pub use parser::{parse_domain, parse_formula, parse_program, validate};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("{span}: expected {}, found {found}", expected.join(" or "))]
    Syntax { span: Span, expected: Vec<String>, found: String },
    #[error("{span}: undeclared {kind} `{name}`")]
    Undeclared { span: Span, kind: &'static str, name: String },
    #[error("{span}: {message}")]
    LawShape { span: Span, message: String },
    #[error("empty domain: no actions declared")]
    EmptyDomain,
    #[error("`{name}` is declared both as an action and as a fluent")]
    Overlap { name: String },
}

#[cfg(test)]
mod tests {
    use super::*;

    const YALE: &str = "
        action load. action shoot. action spin. action wait.
        fluent alive. fluent loaded. fluent in_sight. fluent frightened.
        inertial alive. inertial loaded. inertial in_sight. inertial frightened.
        test in_sight?. test -in_sight?.
        law [shoot] -alive if loaded.
        law [load] loaded.
        law [spin] loaded if not [spin] -loaded.
        law [spin] -loaded if not [spin] loaded.
        caused frightened if in_sight, alive.
        initially alive.
        impossible [load] if loaded.
        constraint ~loaded U in_sight.
    ";

    #[test]
    fn single_action_law() {
        let d = parse_domain("fluent loaded. action load. law [load] loaded.").unwrap();
        assert_eq!(d.laws.len(), 1);
        assert_eq!(d.laws[0].kind, LawKind::Action);
        assert_eq!(d.laws[0].head, Head::ActionEffect("load".into(), Some(FluentLiteral::pos("loaded"))));
    }

    #[test]
    fn undeclared_fluent_reports_position() {
        let err = parse_domain("action a.\nlaw [a] g.").unwrap_err();
        match err {
            SyntaxError::Undeclared { span, kind, name } => {
                assert_eq!((span.line, span.col, kind, name.as_str()), (2, 9, "fluent", "g"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert_eq!(parse_domain(""), Err(SyntaxError::EmptyDomain));
    }

    #[test]
    fn law_shape_violation() {
        let err = parse_domain("action a. action b. fluent f. law [a] f if [b] f.").unwrap_err();
        assert!(matches!(err, SyntaxError::LawShape { .. }));
        let err = parse_domain("action a. fluent f. caused f if next f.").unwrap_err();
        assert!(matches!(err, SyntaxError::LawShape { .. }));
    }

    #[test]
    fn domain_round_trip() {
        let d = parse_domain(YALE).unwrap();
        let again = parse_domain(&d.to_string()).unwrap();
        assert_eq!(d, again);
        let e = expand_with(&d, ExpandOptions { completion: true, dummy: true });
        assert_eq!(parse_domain(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn formula_precedence() {
        let d = parse_domain(YALE).unwrap();
        let f = parse_formula("~loaded U in_sight & alive | loaded -> X alive", &d).unwrap();
        let expected = Formula::implies(
            Formula::or(
                Formula::and(
                    Formula::until(
                        Formula::not(Formula::lit(FluentLiteral::pos("loaded"))),
                        Formula::lit(FluentLiteral::pos("in_sight")),
                    ),
                    Formula::lit(FluentLiteral::pos("alive")),
                ),
                Formula::lit(FluentLiteral::pos("loaded")),
            ),
            Formula::next(Formula::lit(FluentLiteral::pos("alive"))),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn program_precedence_and_tests() {
        let d = parse_domain(YALE).unwrap();
        let f = parse_formula("<-in_sight?; wait; in_sight?; load + shoot*> -alive", &d).unwrap();
        let Formula::Diamond(p, _) = &f else { panic!() };
        assert_eq!(p.to_string(), "((((-in_sight?; wait); in_sight?); load) + shoot*)");
        assert!(parse_formula("<nope> alive", &d).is_err());
        assert!(parse_formula("<alive?> alive", &d).is_err());
    }

    #[test]
    fn core_rewrite_is_idempotent() {
        let d = parse_domain(YALE).unwrap();
        let f = parse_formula("G (loaded -> F [shoot] -alive) & X false", &d).unwrap();
        let c = f.to_core(&d.actions);
        assert!(c.is_core());
        assert_eq!(c.to_core(&d.actions), c);
    }
}
