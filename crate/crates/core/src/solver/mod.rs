//! Answer sets of ground normal programs.
//!
//! Search runs on the Clark completion. Every total assignment the SAT layer
//! reports is checked against the least model of its reduct; if some true
//! atoms are unfounded, one loop nogood per such atom is queued and search
//! resumes.

mod cdcl;

use thiserror::Error;

use crate::ground::{AtomId, GroundProgram, Interpretation, Rule};
use cdcl::{Cdcl, Lit, Status};

#[derive(Clone, Debug)]
pub struct SolveConfig {
    /// Stop after this many answer sets; `None` enumerates all of them.
    pub max_models: Option<usize>,
    pub atom_budget: usize,
    pub conflict_budget: Option<u64>,
    pub seed: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig { max_models: Some(1), atom_budget: 5_000_000, conflict_budget: None, seed: 0 }
    }
}

impl SolveConfig {
    pub fn all() -> Self {
        SolveConfig { max_models: None, ..Default::default() }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("ground program has {atoms} atoms, over the budget of {budget}")]
    AtomBudget { atoms: usize, budget: usize },
}

/// How a solve call ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exhaustion {
    /// Every answer set was found.
    Complete,
    /// Stopped at `max_models`.
    ModelLimit,
    /// Stopped at the conflict budget.
    Budget,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub conflicts: u64,
    pub decisions: u64,
    pub loop_nogoods: u64,
    pub candidates: u64,
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub models: Vec<Interpretation>,
    pub status: Exhaustion,
    pub stats: SolveStats,
}

/// Rules whose negative body is satisfied by `m`, with the negative part dropped.
pub fn reduct(rules: &[Rule], m: &Interpretation) -> Vec<Rule> {
    rules
        .iter()
        .filter(|r| r.neg.iter().all(|&a| !m.contains(a)))
        .map(|r| Rule::new(r.head, r.pos.clone(), vec![]))
        .collect()
}

/// Least model of the positive part of `rules` (negative bodies ignored).
/// Constraints never fire here; check them separately.
pub fn least_model(num_atoms: usize, rules: &[Rule]) -> Interpretation {
    let mut watch: Vec<Vec<usize>> = vec![Vec::new(); num_atoms];
    let mut missing: Vec<usize> = Vec::with_capacity(rules.len());
    let mut truth = vec![false; num_atoms];
    let mut queue = Vec::new();
    for (i, r) in rules.iter().enumerate() {
        let mut body = r.pos.clone();
        body.sort_unstable();
        body.dedup();
        for &a in &body {
            watch[a as usize].push(i);
        }
        missing.push(body.len());
        if body.is_empty() {
            if let Some(h) = r.head {
                if !truth[h as usize] {
                    truth[h as usize] = true;
                    queue.push(h);
                }
            }
        }
    }
    while let Some(a) = queue.pop() {
        for &i in &watch[a as usize] {
            missing[i] -= 1;
            if missing[i] == 0 {
                if let Some(h) = rules[i].head {
                    if !truth[h as usize] {
                        truth[h as usize] = true;
                        queue.push(h);
                    }
                }
            }
        }
    }
    Interpretation::from_truth(truth)
}

fn body_true(r: &Rule, m: &Interpretation) -> bool {
    r.pos.iter().all(|&a| m.contains(a)) && r.neg.iter().all(|&a| !m.contains(a))
}

/// Checks the answer-set condition directly: `m` is the least model of its
/// reduct and violates no constraint.
pub fn is_answer_set(num_atoms: usize, rules: &[Rule], m: &Interpretation) -> bool {
    if rules.iter().any(|r| r.head.is_none() && body_true(r, m)) {
        return false;
    }
    let lm = least_model(num_atoms, &reduct(rules, m));
    (0..num_atoms as AtomId).all(|a| lm.contains(a) == m.contains(a))
}

/// Completion encoding plus what the stability check needs.
struct Encoding {
    num_atoms: usize,
    rules: Vec<Rule>,
    /// Literal standing for each rule body.
    body_lit: Vec<Lit>,
    /// Rules by head atom.
    defining: Vec<Vec<usize>>,
    /// Whether the positive dependency graph has a cycle.
    tight: bool,
}

fn positive_cycle(num_atoms: usize, rules: &[Rule]) -> bool {
    // Kahn's algorithm on head <- positive body edges.
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); num_atoms];
    let mut indeg = vec![0usize; num_atoms];
    for r in rules {
        if let Some(h) = r.head {
            for &b in &r.pos {
                succ[b as usize].push(h as usize);
                indeg[h as usize] += 1;
            }
        }
    }
    let mut stack: Vec<usize> = (0..num_atoms).filter(|&a| indeg[a] == 0).collect();
    let mut seen = 0;
    while let Some(a) = stack.pop() {
        seen += 1;
        for &h in &succ[a] {
            indeg[h] -= 1;
            if indeg[h] == 0 {
                stack.push(h);
            }
        }
    }
    seen < num_atoms
}

fn encode(num_atoms: usize, rules: &[Rule]) -> (Cdcl, Encoding) {
    let mut body_lit = Vec::with_capacity(rules.len());
    let mut aux_bodies: Vec<(usize, Vec<Lit>)> = Vec::new();
    let mut next_var = num_atoms;
    let mut fact = Lit::new(0, true);
    let mut have_fact = false;
    for r in rules {
        let lits: Vec<Lit> = r
            .pos
            .iter()
            .map(|&a| Lit::new(a as usize, true))
            .chain(r.neg.iter().map(|&a| Lit::new(a as usize, false)))
            .collect();
        let l = match lits.len() {
            0 => {
                if !have_fact {
                    fact = Lit::new(next_var, true);
                    next_var += 1;
                    have_fact = true;
                }
                fact
            }
            1 => lits[0],
            _ => {
                let v = next_var;
                next_var += 1;
                aux_bodies.push((v, lits));
                Lit::new(v, true)
            }
        };
        body_lit.push(l);
    }
    let mut sat = Cdcl::new(next_var);
    if have_fact {
        sat.add_clause(vec![fact]);
    }
    for (v, lits) in &aux_bodies {
        let b = Lit::new(*v, true);
        let mut big = vec![b];
        for &l in lits {
            sat.add_clause(vec![!b, l]);
            big.push(!l);
        }
        sat.add_clause(big);
    }
    let mut defining: Vec<Vec<usize>> = vec![Vec::new(); num_atoms];
    for (i, r) in rules.iter().enumerate() {
        match r.head {
            Some(h) => {
                defining[h as usize].push(i);
                sat.add_clause(vec![!body_lit[i], Lit::new(h as usize, true)]);
            }
            None => {
                sat.add_clause(vec![!body_lit[i]]);
            }
        }
    }
    for (a, defs) in defining.iter().enumerate() {
        let mut c = vec![Lit::new(a, false)];
        c.extend(defs.iter().map(|&i| body_lit[i]));
        sat.add_clause(c);
    }
    let tight = !positive_cycle(num_atoms, rules);
    (sat, Encoding { num_atoms, rules: rules.to_vec(), body_lit, defining, tight })
}

impl Encoding {
    fn model(&self, sat: &Cdcl) -> Interpretation {
        Interpretation::from_truth((0..self.num_atoms).map(|v| sat.value_var(v) == Some(true)).collect())
    }

    /// Loop nogoods for the unfounded part of `m`, or empty if `m` is stable.
    fn unfounded_nogoods(&self, m: &Interpretation) -> Vec<Vec<Lit>> {
        if self.tight {
            return Vec::new();
        }
        let lm = least_model(self.num_atoms, &reduct(&self.rules, m));
        let unfounded: Vec<usize> =
            (0..self.num_atoms).filter(|&a| m.contains(a as AtomId) && !lm.contains(a as AtomId)).collect();
        if unfounded.is_empty() {
            return Vec::new();
        }
        let mut in_u = vec![false; self.num_atoms];
        for &u in &unfounded {
            in_u[u] = true;
        }
        let mut external: Vec<Lit> = Vec::new();
        for &u in &unfounded {
            for &i in &self.defining[u] {
                if self.rules[i].pos.iter().all(|&b| !in_u[b as usize]) {
                    external.push(self.body_lit[i]);
                }
            }
        }
        external.sort();
        external.dedup();
        unfounded
            .iter()
            .map(|&u| {
                let mut c = vec![Lit::new(u, false)];
                c.extend(external.iter().copied());
                c
            })
            .collect()
    }
}

/// Enumerates answer sets of `rules` over atoms `0..num_atoms`. `hints` lists
/// atoms to branch on first.
pub fn solve_rules(
    num_atoms: usize,
    rules: &[Rule],
    hints: &[AtomId],
    cfg: &SolveConfig,
) -> Result<SolveOutcome, SolveError> {
    if num_atoms > cfg.atom_budget {
        return Err(SolveError::AtomBudget { atoms: num_atoms, budget: cfg.atom_budget });
    }
    let (mut sat, enc) = encode(num_atoms, rules);
    let order: Vec<usize> = hints.iter().map(|&a| a as usize).collect();
    sat.seed_activity(&order, cfg.seed);
    let mut models = Vec::new();
    let mut stats = SolveStats::default();
    let status = loop {
        if cfg.max_models.is_some_and(|n| models.len() >= n) {
            break Exhaustion::ModelLimit;
        }
        let budget = cfg.conflict_budget;
        match sat.search(budget) {
            Status::Unsat => break Exhaustion::Complete,
            Status::Budget => break Exhaustion::Budget,
            Status::Model => {
                stats.candidates += 1;
                let m = enc.model(&sat);
                let nogoods = enc.unfounded_nogoods(&m);
                if nogoods.is_empty() {
                    debug_assert!(is_answer_set(num_atoms, rules, &m));
                    models.push(m);
                    let block: Vec<Lit> = sat.decision_lits().into_iter().map(|l| !l).collect();
                    if block.is_empty() {
                        break Exhaustion::Complete;
                    }
                    sat.add_clause_during_search(block);
                } else {
                    stats.loop_nogoods += nogoods.len() as u64;
                    for c in nogoods {
                        sat.add_clause_during_search(c);
                    }
                }
            }
        }
    };
    stats.conflicts = sat.conflicts;
    stats.decisions = sat.decisions;
    Ok(SolveOutcome { models, status, stats })
}

/// Enumerates answer sets of a ground program, branching on its hints first.
pub fn solve(g: &GroundProgram, cfg: &SolveConfig) -> Result<SolveOutcome, SolveError> {
    solve_rules(g.num_atoms(), &g.rules, &g.hints, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(head: Option<u32>, pos: &[u32], neg: &[u32]) -> Rule {
        Rule::new(head, pos.to_vec(), neg.to_vec())
    }

    fn count(n: usize, rules: &[Rule]) -> usize {
        solve_rules(n, rules, &[], &SolveConfig::all()).unwrap().models.len()
    }

    #[test]
    fn even_and_odd_loops() {
        // a :- not b. b :- not a.
        assert_eq!(count(2, &[r(Some(0), &[], &[1]), r(Some(1), &[], &[0])]), 2);
        // a :- not a.
        assert_eq!(count(1, &[r(Some(0), &[], &[0])]), 0);
    }

    #[test]
    fn positive_loop_is_unfounded() {
        // a :- b. b :- a. c :- not a.
        let rules = [r(Some(0), &[1], &[]), r(Some(1), &[0], &[]), r(Some(2), &[], &[0])];
        let out = solve_rules(3, &rules, &[], &SolveConfig::all()).unwrap();
        assert_eq!(out.models.len(), 1);
        assert_eq!(out.models[0].atoms().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn loop_with_external_support() {
        // a :- b. b :- a. a :- not c. c :- not a.
        let rules = [r(Some(0), &[1], &[]), r(Some(1), &[0], &[]), r(Some(0), &[], &[2]), r(Some(2), &[], &[0])];
        let out = solve_rules(3, &rules, &[], &SolveConfig::all()).unwrap();
        let mut sets: Vec<Vec<u32>> = out.models.iter().map(|m| m.atoms().collect()).collect();
        sets.sort();
        assert_eq!(sets, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn constraints_and_limits() {
        let rules = [r(Some(0), &[], &[1]), r(Some(1), &[], &[0]), r(None, &[0], &[])];
        assert_eq!(count(2, &rules), 1);
        let cfg = SolveConfig { max_models: Some(1), ..Default::default() };
        let out = solve_rules(2, &rules[..2], &[], &cfg).unwrap();
        assert_eq!(out.status, Exhaustion::ModelLimit);
        let cfg = SolveConfig { atom_budget: 1, ..Default::default() };
        assert!(solve_rules(2, &rules, &[], &cfg).is_err());
    }

    #[test]
    fn reduct_and_least_model() {
        let rules = [r(Some(0), &[], &[1]), r(Some(1), &[0], &[])];
        let m = Interpretation::from_atoms(2, [0, 1]);
        let lm = least_model(2, &reduct(&rules, &m));
        assert_eq!(lm.atoms().count(), 0);
        assert!(!is_answer_set(2, &rules, &m));
    }
}
