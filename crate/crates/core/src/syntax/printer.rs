use std::fmt;

use super::ast::*;

fn write_cond(f: &mut fmt::Formatter<'_>, body: &[ExtLiteral]) -> fmt::Result {
    for (i, e) in body.iter().enumerate() {
        write!(f, "{}{e}", if i == 0 { " if " } else { ", " })?;
    }
    Ok(())
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.kind, &self.head) {
            (LawKind::Action, Head::ActionEffect(a, Some(l))) => write!(f, "law [{a}] {l}")?,
            (LawKind::Precondition, Head::ActionEffect(a, None)) => write!(f, "impossible [{a}]")?,
            (LawKind::DynamicCausal, Head::NextEffect(l)) => write!(f, "caused next {l}")?,
            (LawKind::StaticCausal, Head::Literal(l)) => write!(f, "caused {l}")?,
            (LawKind::StateConstraint, _) => write!(f, "caused false")?,
            (LawKind::InitialState, Head::Literal(l)) => write!(f, "initially {l}")?,
            (LawKind::InitialState, Head::Falsum) => write!(f, "initially false")?,
            (kind, head) => write!(f, "% malformed {kind:?} {head:?}")?,
        }
        write_cond(f, &self.body)?;
        write!(f, ".")
    }
}

impl fmt::Display for DomainDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.actions {
            if self.is_test_action(a) {
                writeln!(f, "test {a}.")?;
            } else {
                writeln!(f, "action {a}.")?;
            }
        }
        for p in &self.fluents {
            writeln!(f, "fluent {p}.")?;
        }
        for p in &self.inertial {
            writeln!(f, "inertial {p}.")?;
        }
        for law in &self.laws {
            writeln!(f, "{law}")?;
        }
        for c in &self.constraints {
            writeln!(f, "constraint {}.", c.formula)?;
        }
        Ok(())
    }
}
