//! Structural comparison of two ground programs on the temporal layer.
//!
//! Both programs are reduced the same way before comparing:
//! 1. facts over domain predicates (`state`, `action`, `trans`, ...) are
//!    dropped and removed from rule bodies; `trans`/`final` facts are kept
//!    aside and compared as sets;
//! 2. consistency constraints `:- p, -p` are dropped, since they are implicit
//!    when strong negation is native;
//! 3. only rules defining `sat`, `next`, `-next`, `eq_last` and `diff_last`
//!    are kept, along with constraints mentioning those predicates;
//! 4. of these, only the rules reachable backwards from the constraints
//!    remain.
//!
//! The surviving rules are compared as multisets, after applying an optional
//! renaming to the left program.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::text::{ground, parse, predicate_of, TextError, TextRule};

pub const DOMAIN_PREDICATES: &[&str] = &["state", "laststate", "action", "fluent", "room", "formula", "trans", "final"];
pub const LAYER_PREDICATES: &[&str] = &["sat", "next", "-next", "eq_last", "diff_last"];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LayerDiff {
    pub only_left: Vec<String>,
    pub only_right: Vec<String>,
    pub automata_only_left: Vec<String>,
    pub automata_only_right: Vec<String>,
    pub compared: usize,
}

impl LayerDiff {
    pub fn is_equal(&self) -> bool {
        self.only_left.is_empty()
            && self.only_right.is_empty()
            && self.automata_only_left.is_empty()
            && self.automata_only_right.is_empty()
    }
}

impl fmt::Display for LayerDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_equal() {
            return writeln!(f, "equal ({} rules compared)", self.compared);
        }
        for r in &self.only_left {
            writeln!(f, "< {r}")?;
        }
        for r in &self.only_right {
            writeln!(f, "> {r}")?;
        }
        for r in &self.automata_only_left {
            writeln!(f, "< {r}")?;
        }
        for r in &self.automata_only_right {
            writeln!(f, "> {r}")?;
        }
        Ok(())
    }
}

struct Layer {
    rules: Vec<TextRule>,
    automata: BTreeSet<String>,
}

fn is_domain(atom: &str) -> bool {
    DOMAIN_PREDICATES.contains(&predicate_of(atom))
}

fn in_layer(atom: &str) -> bool {
    LAYER_PREDICATES.contains(&predicate_of(atom))
}

fn complementary(a: &str, b: &str) -> bool {
    a.strip_prefix('-') == Some(b) || b.strip_prefix('-') == Some(a)
}

fn reduce(rules: &[TextRule], rename: &dyn Fn(&str) -> String) -> Layer {
    let mut automata = BTreeSet::new();
    let mut kept = Vec::new();
    for r in rules {
        let ren = |v: &[String]| -> Vec<String> { v.iter().map(|a| rename(a)).collect() };
        let head = r.head.as_deref().map(rename);
        let mut pos: Vec<String> = ren(&r.pos).into_iter().filter(|a| !is_domain(a)).collect();
        let mut neg = ren(&r.neg);
        if let Some(h) = &head {
            if is_domain(h) {
                let p = predicate_of(h);
                if (p == "trans" || p == "final") && pos.is_empty() && neg.is_empty() {
                    automata.insert(format!("{h}."));
                }
                continue;
            }
        }
        if head.is_none() && neg.is_empty() && pos.len() == 2 && complementary(&pos[0], &pos[1]) {
            continue;
        }
        pos.sort();
        pos.dedup();
        neg.sort();
        neg.dedup();
        let keep = match &head {
            Some(h) => in_layer(h),
            None => pos.iter().chain(&neg).any(|a| in_layer(a)),
        };
        if keep {
            kept.push(TextRule { head, pos, neg });
        }
    }

    // Relevance cone from the constraints.
    let mut by_head: HashMap<String, Vec<usize>> = HashMap::new();
    for (i, r) in kept.iter().enumerate() {
        if let Some(h) = &r.head {
            by_head.entry(h.clone()).or_default().push(i);
        }
    }
    let mut selected = vec![false; kept.len()];
    let mut stack: Vec<usize> = (0..kept.len()).filter(|&i| kept[i].head.is_none()).collect();
    let mut seen_atoms = BTreeSet::new();
    while let Some(i) = stack.pop() {
        if selected[i] {
            continue;
        }
        selected[i] = true;
        for a in kept[i].pos.iter().chain(&kept[i].neg) {
            if seen_atoms.insert(a.clone()) {
                if let Some(rs) = by_head.get(a) {
                    stack.extend(rs.iter().copied());
                }
            }
        }
    }
    let rules = kept.into_iter().zip(selected).filter(|(_, s)| *s).map(|(r, _)| r).collect();
    Layer { rules, automata }
}

fn multiset(rules: &[TextRule]) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for r in rules {
        *m.entry(r.to_string()).or_insert(0) += 1;
    }
    m
}

/// Compares two ground rule lists on the temporal layer. `renaming` maps atom
/// text substrings of the left program onto the right program's names.
pub fn layer_diff(left: &[TextRule], right: &[TextRule], renaming: &[(String, String)]) -> LayerDiff {
    let rename = |a: &str| -> String {
        let mut s = a.to_string();
        for (from, to) in renaming {
            s = s.replace(from.as_str(), to.as_str());
        }
        s
    };
    let l = reduce(left, &rename);
    let r = reduce(right, &|a: &str| a.to_string());
    let (ml, mr) = (multiset(&l.rules), multiset(&r.rules));
    let mut diff = LayerDiff { compared: l.rules.len().max(r.rules.len()), ..Default::default() };
    for (k, n) in &ml {
        let m = mr.get(k).copied().unwrap_or(0);
        for _ in m..*n {
            diff.only_left.push(k.clone());
        }
    }
    for (k, n) in &mr {
        let m = ml.get(k).copied().unwrap_or(0);
        for _ in m..*n {
            diff.only_right.push(k.clone());
        }
    }
    diff.automata_only_left = l.automata.difference(&r.automata).cloned().collect();
    diff.automata_only_right = r.automata.difference(&l.automata).cloned().collect();
    diff
}

/// Parses and grounds both texts, then compares them with [`layer_diff`].
pub fn diff_texts(left: &str, right: &str, renaming: &[(String, String)]) -> Result<LayerDiff, TextError> {
    let l = ground(&parse(left)?)?;
    let r = ground(&parse(right)?)?;
    Ok(layer_diff(&l, &r, renaming))
}
