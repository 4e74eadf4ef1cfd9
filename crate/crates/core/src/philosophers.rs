//! Dining philosophers benchmark generator.
//!
//! Philosopher `i` (1-based, `N` of them around the table) uses fork `i` as
//! its left fork and fork `i+1` (fork 1 for the last one) as its right fork.
//! Each philosopher cycles through `take_left(i)`, `take_right(i)`, `eat(i)`
//! and `release(i)`; one action runs per step. `idle` is possible only when
//! nothing else is, so deadlocked runs can continue forever.
//!
//! Fluents: `hl(i)` / `hr(i)` (holds its left / right fork) and `done(i)`
//! (has eaten with the forks it holds). Initially philosopher 1 holds both
//! of its forks and has not eaten yet; everybody else holds nothing.
//!
//! The checked property is that some philosopher eats infinitely often:
//! `G F <eat(1) + ... + eat(N)> true`. Its shortest counterexample lets
//! philosopher 1 eat and release, then every philosopher takes its left
//! fork, and `idle` loops: `N + 2` steps before the loop.

use std::fmt::Write as _;

/// Returns `(domain, formula)` sources for `n` philosophers.
pub fn generate(n: usize) -> (String, String) {
    assert!(n >= 2, "need at least two philosophers");
    let left_of = |i: usize| if i == 1 { n } else { i - 1 };
    let right_of = |i: usize| if i == n { 1 } else { i + 1 };
    let mut d = String::new();
    let _ = writeln!(d, "% Dining philosophers, N = {n}, interleaving semantics.");
    for i in 1..=n {
        let _ = writeln!(d, "action take_left({i}). action take_right({i}). action eat({i}). action release({i}).");
    }
    let _ = writeln!(d, "action idle.");
    for i in 1..=n {
        let _ = writeln!(d, "fluent hl({i}). fluent hr({i}). fluent done({i}).");
        let _ = writeln!(d, "inertial hl({i}). inertial hr({i}). inertial done({i}).");
    }
    d.push('\n');
    // Enabling condition of each action, as a precondition body for idle.
    let mut enabled: Vec<String> = Vec::new();
    for i in 1..=n {
        let (l, r) = (left_of(i), right_of(i));
        let _ = writeln!(d, "law [take_left({i})] hl({i}).");
        let _ = writeln!(d, "impossible [take_left({i})] if hl({i}).");
        let _ = writeln!(d, "impossible [take_left({i})] if hr({l}).");
        enabled.push(format!("-hl({i}), -hr({l})"));

        let _ = writeln!(d, "law [take_right({i})] hr({i}).");
        let _ = writeln!(d, "impossible [take_right({i})] if -hl({i}).");
        let _ = writeln!(d, "impossible [take_right({i})] if hr({i}).");
        let _ = writeln!(d, "impossible [take_right({i})] if hl({r}).");
        enabled.push(format!("hl({i}), -hr({i}), -hl({r})"));

        let _ = writeln!(d, "law [eat({i})] done({i}).");
        let _ = writeln!(d, "impossible [eat({i})] if -hl({i}).");
        let _ = writeln!(d, "impossible [eat({i})] if -hr({i}).");
        let _ = writeln!(d, "impossible [eat({i})] if done({i}).");
        enabled.push(format!("hl({i}), hr({i}), -done({i})"));

        let _ = writeln!(d, "law [release({i})] -hl({i}).");
        let _ = writeln!(d, "law [release({i})] -hr({i}).");
        let _ = writeln!(d, "law [release({i})] -done({i}).");
        let _ = writeln!(d, "impossible [release({i})] if -done({i}).");
        enabled.push(format!("done({i})"));
        d.push('\n');
    }
    for cond in &enabled {
        let _ = writeln!(d, "impossible [idle] if {cond}.");
    }
    d.push('\n');
    for i in 1..=n {
        let held = if i == 1 { "" } else { "-" };
        let _ = writeln!(d, "initially {held}hl({i}). initially {held}hr({i}). initially -done({i}).");
    }
    (d, format!("G F <{}> true\n", eats(n)))
}

/// Negation of the checked property: from some point on nobody eats.
/// `check` with this formula finds what `valid` reports as a counterexample.
pub fn violation(n: usize) -> String {
    format!("F G ~<{}> true\n", eats(n))
}

fn eats(n: usize) -> String {
    (1..=n).map(|i| format!("eat({i})")).collect::<Vec<_>>().join(" + ")
}
