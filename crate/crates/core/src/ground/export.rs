use super::{Closure, GroundProgram};

impl GroundProgram {
    /// The program as ASP text, followed by the automata as `trans`/`final` facts.
    pub fn export_text(&self) -> String {
        let mut out = format!("% k = {}, {} atoms, {} rules\n", self.k, self.num_atoms(), self.rules.len());
        for r in &self.rules {
            out.push_str(&self.rule_text(r));
            out.push('\n');
        }
        for (i, nfa) in self.closure.automata().iter().enumerate() {
            out.push_str(&nfa.dump(&Closure::automaton_name(i as u32)));
        }
        out
    }

    /// One rule per line, ordered by head atom; constraints last.
    pub fn dump(&self) -> String {
        let mut rules: Vec<_> = self.rules.iter().collect();
        rules.sort_by_key(|r| r.head.map_or(u64::MAX, u64::from));
        let mut out = String::new();
        for r in rules {
            out.push_str(&self.rule_text(r));
            out.push('\n');
        }
        out
    }
}
