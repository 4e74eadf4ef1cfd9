//! Conflict-driven clause learning over propositional clauses.
//!
//! Clauses that arrive during search (loop nogoods, blocking clauses) go into
//! a pending queue and are attached once the current assignment lets them be
//! watched correctly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: usize, positive: bool) -> Lit {
        Lit((var as u32) << 1 | (!positive) as u32)
    }
    pub fn var(self) -> usize {
        (self.0 >> 1) as usize
    }
    pub fn positive(self) -> bool {
        self.0 & 1 == 0
    }
    fn idx(self) -> usize {
        self.0 as usize
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

const UNDEF: i8 = 0;
const TRUE: i8 = 1;
const FALSE: i8 = -1;

type CRef = u32;

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    activity: f64,
    deleted: bool,
}

#[derive(Clone, Copy)]
struct Watch {
    cref: CRef,
    blocker: Lit,
}

/// Result of a search call.
#[derive(Debug, PartialEq, Eq)]
pub enum Status {
    /// Total assignment satisfying every clause.
    Model,
    Unsat,
    Budget,
}

/// Max-heap of variables keyed by activity.
struct VarHeap {
    heap: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    fn new(n: usize) -> Self {
        VarHeap { heap: Vec::with_capacity(n), pos: vec![None; n] }
    }

    fn less(act: &[f64], a: usize, b: usize) -> bool {
        act[a] > act[b] || (act[a] == act[b] && a < b)
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v].is_some()
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let p = (i - 1) / 2;
            if !Self::less(act, v, self.heap[p]) {
                break;
            }
            self.heap[i] = self.heap[p];
            self.pos[self.heap[i]] = Some(i);
            i = p;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let l = 2 * i + 1;
            if l >= self.heap.len() {
                break;
            }
            let r = l + 1;
            let c = if r < self.heap.len() && Self::less(act, self.heap[r], self.heap[l]) { r } else { l };
            if !Self::less(act, self.heap[c], v) {
                break;
            }
            self.heap[i] = self.heap[c];
            self.pos[self.heap[i]] = Some(i);
            i = c;
        }
        self.heap[i] = v;
        self.pos[v] = Some(i);
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v);
        let i = self.heap.len() - 1;
        self.pos[v] = Some(i);
        self.up(i, act);
    }

    fn increased(&mut self, v: usize, act: &[f64]) {
        if let Some(i) = self.pos[v] {
            self.up(i, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap[0];
        let last = self.heap.pop().unwrap();
        self.pos[top] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = Some(0);
            self.down(0, act);
        }
        Some(top)
    }
}

fn luby(y: f64, mut x: u64) -> f64 {
    let (mut size, mut seq) = (1u64, 0i32);
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq)
}

pub struct Cdcl {
    num_vars: usize,
    clauses: Vec<Clause>,
    watches: Vec<Vec<Watch>>,
    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<CRef>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    heap: VarHeap,
    polarity: Vec<bool>,
    seen: Vec<bool>,
    learnts: Vec<CRef>,
    pending: Vec<Vec<Lit>>,
    unsat: bool,
    pub conflicts: u64,
    pub decisions: u64,
    restart_count: u64,
    conflicts_at_restart: u64,
    max_learnts: f64,
}

enum PendingOutcome {
    Quiet,
    Progress,
    Unsat,
}

impl Cdcl {
    pub fn new(num_vars: usize) -> Self {
        let mut s = Cdcl {
            num_vars,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            assigns: vec![UNDEF; num_vars],
            level: vec![0; num_vars],
            reason: vec![None; num_vars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; num_vars],
            var_inc: 1.0,
            cla_inc: 1.0,
            heap: VarHeap::new(num_vars),
            polarity: vec![false; num_vars],
            seen: vec![false; num_vars],
            learnts: Vec::new(),
            pending: Vec::new(),
            unsat: false,
            conflicts: 0,
            decisions: 0,
            restart_count: 0,
            conflicts_at_restart: 0,
            max_learnts: 0.0,
        };
        for v in 0..num_vars {
            s.heap.insert(v, &s.activity);
        }
        s
    }

    /// Seeds branching: earlier variables in `order` are tried first, and a
    /// small seeded jitter breaks the remaining ties.
    pub fn seed_activity(&mut self, order: &[usize], seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = order.len().max(1) as f64;
        for v in 0..self.num_vars {
            self.activity[v] = if seed == 0 { 0.0 } else { rng.gen::<f64>() * 1e-6 };
        }
        for (i, &v) in order.iter().enumerate() {
            self.activity[v] += (n - i as f64) / n;
        }
        self.heap = VarHeap::new(self.num_vars);
        for v in 0..self.num_vars {
            if self.assigns[v] == UNDEF {
                self.heap.insert(v, &self.activity);
            }
        }
    }

    pub fn value_var(&self, v: usize) -> Option<bool> {
        match self.assigns[v] {
            TRUE => Some(true),
            FALSE => Some(false),
            _ => None,
        }
    }

    fn value(&self, l: Lit) -> i8 {
        let v = self.assigns[l.var()];
        if l.positive() {
            v
        } else {
            -v
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: Option<CRef>) {
        let v = l.var();
        debug_assert_eq!(self.assigns[v], UNDEF);
        self.assigns[v] = if l.positive() { TRUE } else { FALSE };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> CRef {
        let cref = self.clauses.len() as CRef;
        self.watches[lits[0].idx()].push(Watch { cref, blocker: lits[1] });
        self.watches[lits[1].idx()].push(Watch { cref, blocker: lits[0] });
        self.clauses.push(Clause { lits, learnt, activity: 0.0, deleted: false });
        if learnt {
            self.learnts.push(cref);
        }
        cref
    }

    /// Adds a clause before search starts. Returns false if the formula is
    /// now trivially unsatisfiable.
    pub fn add_clause(&mut self, mut lits: Vec<Lit>) -> bool {
        if self.unsat {
            return false;
        }
        lits.sort();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == !w[1]) {
            return true;
        }
        if self.decision_level() > 0 {
            self.pending.push(lits);
            return true;
        }
        lits.retain(|&l| self.value(l) != FALSE);
        if lits.iter().any(|&l| self.value(l) == TRUE) {
            return true;
        }
        match lits.len() {
            0 => {
                self.unsat = true;
                false
            }
            1 => {
                self.enqueue(lits[0], None);
                if self.propagate().is_some() {
                    self.unsat = true;
                }
                !self.unsat
            }
            _ => {
                self.attach(lits, false);
                true
            }
        }
    }

    /// Queues a clause found during search (e.g. a loop nogood).
    pub fn add_clause_during_search(&mut self, mut lits: Vec<Lit>) {
        lits.sort();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == !w[1]) {
            return;
        }
        self.pending.push(lits);
    }

    fn propagate(&mut self) -> Option<CRef> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.idx()]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == TRUE {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref;
                let c = &mut self.clauses[cref as usize];
                if c.deleted {
                    continue;
                }
                if c.lits[0] == false_lit {
                    c.lits.swap(0, 1);
                }
                let first = c.lits[0];
                let first_val = {
                    let v = self.assigns[first.var()];
                    if first.positive() {
                        v
                    } else {
                        -v
                    }
                };
                if first != w.blocker && first_val == TRUE {
                    ws[j] = Watch { cref, blocker: first };
                    j += 1;
                    continue;
                }
                let mut found = false;
                for k in 2..c.lits.len() {
                    let l = c.lits[k];
                    let v = self.assigns[l.var()];
                    let lv = if l.positive() { v } else { -v };
                    if lv != FALSE {
                        c.lits.swap(1, k);
                        let nl = c.lits[1];
                        self.watches[nl.idx()].push(Watch { cref, blocker: first });
                        found = true;
                        break;
                    }
                }
                if found {
                    continue;
                }
                ws[j] = Watch { cref, blocker: first };
                j += 1;
                if first_val == FALSE {
                    conflict = Some(cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, Some(cref));
                }
            }
            ws.truncate(j);
            self.watches[false_lit.idx()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: CRef) {
        let c = &mut self.clauses[cref as usize];
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &l in &self.learnts {
                self.clauses[l as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn analyze(&mut self, mut confl: CRef) -> (Vec<Lit>, u32) {
        let mut learnt = vec![Lit(0)];
        let mut path = 0;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        let dl = self.decision_level();
        loop {
            if self.clauses[confl as usize].learnt {
                self.bump_clause(confl);
            }
            let lits = self.clauses[confl as usize].lits.clone();
            let start = if p.is_some() { 1 } else { 0 };
            for &q in &lits[start..] {
                let v = q.var();
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= dl {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var()] {
                    break;
                }
            }
            let pl = self.trail[idx];
            p = Some(pl);
            self.seen[pl.var()] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason[pl.var()].expect("implied literal has a reason");
        }
        learnt[0] = !p.unwrap();

        // Drop literals implied by the rest of the clause.
        let keep: Vec<bool> = learnt
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                if i == 0 {
                    return true;
                }
                match self.reason[l.var()] {
                    None => true,
                    Some(r) => self.clauses[r as usize].lits[1..]
                        .iter()
                        .any(|&x| !self.seen[x.var()] && self.level[x.var()] > 0),
                }
            })
            .collect();
        for &l in &learnt {
            self.seen[l.var()] = false;
        }
        let mut out: Vec<Lit> = learnt.into_iter().zip(keep).filter(|(_, k)| *k).map(|(l, _)| l).collect();

        let mut bt = 0;
        if out.len() > 1 {
            let mut max_i = 1;
            for i in 2..out.len() {
                if self.level[out[i].var()] > self.level[out[max_i].var()] {
                    max_i = i;
                }
            }
            out.swap(1, max_i);
            bt = self.level[out[1].var()];
        }
        (out, bt)
    }

    fn backtrack(&mut self, lvl: u32) {
        if self.decision_level() <= lvl {
            return;
        }
        let lim = self.trail_lim[lvl as usize];
        for i in (lim..self.trail.len()).rev() {
            let v = self.trail[i].var();
            self.polarity[v] = self.assigns[v] == TRUE;
            self.assigns[v] = UNDEF;
            self.reason[v] = None;
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(lvl as usize);
        self.qhead = lim;
    }

    /// Learns from a conflict and backjumps. Returns false at level 0.
    fn handle_conflict(&mut self, confl: CRef) -> bool {
        self.conflicts += 1;
        if self.decision_level() == 0 {
            self.unsat = true;
            return false;
        }
        let (learnt, bt) = self.analyze(confl);
        self.backtrack(bt);
        if learnt.len() == 1 {
            self.enqueue(learnt[0], None);
        } else {
            let l0 = learnt[0];
            let cref = self.attach(learnt, true);
            self.bump_clause(cref);
            self.enqueue(l0, Some(cref));
        }
        self.var_inc /= 0.95;
        self.cla_inc /= 0.999;
        true
    }

    /// Tries to attach queued clauses under the current assignment.
    fn process_pending(&mut self) -> PendingOutcome {
        let mut progress = false;
        let mut i = 0;
        while i < self.pending.len() {
            let mut lits = self.pending[i].clone();
            // Rank: true (low level first), unassigned, false (high level first).
            let key = |s: &Self, l: Lit| -> (u8, i64) {
                match s.value(l) {
                    TRUE => (0, s.level[l.var()] as i64),
                    UNDEF => (1, 0),
                    _ => (2, -(s.level[l.var()] as i64)),
                }
            };
            lits.sort_by_key(|&l| key(self, l));
            let non_false = lits.iter().filter(|&&l| self.value(l) != FALSE).count();
            match lits.len() {
                0 => {
                    self.unsat = true;
                    return PendingOutcome::Unsat;
                }
                1 => {
                    let l = lits[0];
                    match self.value(l) {
                        TRUE if self.level[l.var()] == 0 => {
                            self.pending.swap_remove(i);
                        }
                        FALSE if self.level[l.var()] == 0 => {
                            self.unsat = true;
                            return PendingOutcome::Unsat;
                        }
                        TRUE | FALSE => {
                            self.backtrack(0);
                            progress = true;
                        }
                        _ => {
                            self.pending.swap_remove(i);
                            if self.decision_level() > 0 {
                                self.backtrack(0);
                            }
                            self.enqueue(l, None);
                            return PendingOutcome::Progress;
                        }
                    }
                    continue;
                }
                _ => {}
            }
            if non_false >= 2 {
                self.pending.swap_remove(i);
                self.attach(lits, false);
                continue;
            }
            if non_false == 1 {
                let l0 = lits[0];
                let l1_level = self.level[lits[1].var()];
                if self.value(l0) == UNDEF {
                    self.pending.swap_remove(i);
                    let cref = self.attach(lits, false);
                    self.enqueue(l0, Some(cref));
                    return PendingOutcome::Progress;
                }
                if self.level[l0.var()] <= l1_level {
                    self.pending.swap_remove(i);
                    self.attach(lits, false);
                    continue;
                }
                // Satisfied above the level where it would become unit; recheck later.
                i += 1;
                continue;
            }
            // Every literal is false.
            let m = self.level[lits[0].var()];
            if m == 0 {
                self.unsat = true;
                return PendingOutcome::Unsat;
            }
            let m2 = self.level[lits[1].var()];
            if m2 < m {
                self.backtrack(m2);
                progress = true;
                continue; // now unit; handled on the next pass
            }
            self.pending.swap_remove(i);
            self.backtrack(m);
            let cref = self.attach(lits, false);
            if !self.handle_conflict(cref) {
                return PendingOutcome::Unsat;
            }
            return PendingOutcome::Progress;
        }
        if progress {
            PendingOutcome::Progress
        } else {
            PendingOutcome::Quiet
        }
    }

    fn reduce_db(&mut self) {
        let mut cands: Vec<CRef> = self
            .learnts
            .iter()
            .copied()
            .filter(|&c| {
                let cl = &self.clauses[c as usize];
                !cl.deleted && cl.lits.len() > 2 && !self.locked(c)
            })
            .collect();
        cands.sort_by(|&a, &b| {
            self.clauses[a as usize].activity.partial_cmp(&self.clauses[b as usize].activity).unwrap()
        });
        for &c in cands.iter().take(cands.len() / 2) {
            let cl = &mut self.clauses[c as usize];
            cl.deleted = true;
            cl.lits = Vec::new();
        }
        self.learnts.retain(|&c| !self.clauses[c as usize].deleted);
    }

    fn locked(&self, c: CRef) -> bool {
        let l0 = self.clauses[c as usize].lits[0];
        self.value(l0) == TRUE && self.reason[l0.var()] == Some(c)
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v] == UNDEF {
                return Some(Lit::new(v, self.polarity[v]));
            }
        }
        None
    }

    /// Searches for a total assignment satisfying all clauses.
    pub fn search(&mut self, conflict_budget: Option<u64>) -> Status {
        if self.unsat {
            return Status::Unsat;
        }
        if self.max_learnts == 0.0 {
            self.max_learnts = (self.clauses.len() as f64 / 3.0).max(2000.0);
        }
        loop {
            if let Some(confl) = self.propagate() {
                if !self.handle_conflict(confl) {
                    return Status::Unsat;
                }
                if let Some(b) = conflict_budget {
                    if self.conflicts >= b {
                        return Status::Budget;
                    }
                }
                continue;
            }
            match self.process_pending() {
                PendingOutcome::Unsat => return Status::Unsat,
                PendingOutcome::Progress => continue,
                PendingOutcome::Quiet => {}
            }
            let limit = (luby(2.0, self.restart_count) * 100.0) as u64;
            if self.conflicts - self.conflicts_at_restart >= limit {
                self.restart_count += 1;
                self.conflicts_at_restart = self.conflicts;
                self.backtrack(0);
                continue;
            }
            if self.learnts.len() as f64 >= self.max_learnts + self.trail.len() as f64 {
                self.reduce_db();
                self.max_learnts *= 1.1;
            }
            match self.pick_branch() {
                None => return Status::Model,
                Some(l) => {
                    self.decisions += 1;
                    self.trail_lim.push(self.trail.len());
                    self.enqueue(l, None);
                }
            }
        }
    }

    /// Decision literals of the current assignment.
    pub fn decision_lits(&self) -> Vec<Lit> {
        self.trail_lim.iter().map(|&i| self.trail[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(v: i32) -> Lit {
        Lit::new(v.unsigned_abs() as usize - 1, v > 0)
    }

    fn solve_all(n: usize, clauses: &[Vec<i32>]) -> usize {
        let mut s = Cdcl::new(n);
        for c in clauses {
            s.add_clause(c.iter().map(|&x| l(x)).collect());
        }
        let mut count = 0;
        loop {
            match s.search(None) {
                Status::Model => {
                    count += 1;
                    let block: Vec<Lit> = (0..n).map(|v| Lit::new(v, s.value_var(v) != Some(true))).collect();
                    s.add_clause_during_search(block);
                }
                Status::Unsat => return count,
                Status::Budget => unreachable!(),
            }
        }
    }

    #[test]
    fn counts_models() {
        assert_eq!(solve_all(3, &[]), 8);
        assert_eq!(solve_all(3, &[vec![1, 2, 3]]), 7);
        assert_eq!(solve_all(2, &[vec![1], vec![-1, 2]]), 1);
        assert_eq!(solve_all(2, &[vec![1], vec![-1]]), 0);
    }

    #[test]
    fn pigeonhole_three_into_two() {
        // p(i,h): pigeon i in hole h; var = 2*i + h + 1
        let v = |i: i32, h: i32| 2 * i + h + 1;
        let mut cs = Vec::new();
        for i in 0..3 {
            cs.push(vec![v(i, 0), v(i, 1)]);
        }
        for h in 0..2 {
            for i in 0..3 {
                for j in i + 1..3 {
                    cs.push(vec![-v(i, h), -v(j, h)]);
                }
            }
        }
        assert_eq!(solve_all(6, &cs), 0);
    }
}
