//! Seeded generator of random closed terms, for property tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Message labels with fixed arity: `m()` and `n(x)`.
const LABELS: [(&str, usize); 2] = [("m", 0), ("n", 1)];

struct Gen {
    rng: ChaCha8Rng,
    points: usize,
    max_points: usize,
    fresh: usize,
    /// (address, label) pairs some generated actor handles
    handled: Vec<(String, &'static str)>,
}

impl Gen {
    fn take(&mut self) -> bool {
        if self.points < self.max_points {
            self.points += 1;
            true
        } else {
            false
        }
    }

    fn var(&mut self, prefix: &str) -> String {
        self.fresh += 1;
        format!("{prefix}{}", self.fresh)
    }

    fn message(&mut self, addrs: &[String]) -> Option<String> {
        if !self.take() {
            return None;
        }
        let mut target = addrs.choose(&mut self.rng).unwrap().clone();
        let (mut label, mut arity) = LABELS[self.rng.gen_range(0..LABELS.len())];
        let known: Vec<_> = self.handled.iter().filter(|(a, _)| addrs.contains(a)).cloned().collect();
        if !known.is_empty() && self.rng.gen_bool(0.8) {
            // mostly send something that can be handled
            let (a, l) = known.choose(&mut self.rng).unwrap().clone();
            target = a;
            (label, arity) = *LABELS.iter().find(|(n, _)| *n == l).unwrap();
        }
        let args: Vec<String> = (0..arity).map(|_| addrs.choose(&mut self.rng).unwrap().clone()).collect();
        Some(format!("{target} <| {label}({})", args.join(", ")))
    }

    fn actor(&mut self, addrs: &[String], depth: usize) -> Option<String> {
        if !self.take() {
            return None;
        }
        let addr = addrs.choose(&mut self.rng).unwrap().clone();
        let mut branches = Vec::new();
        let mut labels: Vec<_> = LABELS.to_vec();
        labels.shuffle(&mut self.rng);
        let n = self.rng.gen_range(1..=2);
        for &(label, arity) in labels.iter().take(n) {
            if !self.take() {
                break;
            }
            self.handled.push((addr.clone(), label));
            let formals: Vec<String> = (0..arity).map(|_| self.var("x")).collect();
            let (e, s) = (self.var("e"), self.var("s"));
            let mut scope = addrs.to_vec();
            scope.extend(formals.iter().cloned());
            scope.push(e.clone());
            let body = self.body(&scope, &e, &s, depth);
            branches.push(format!("{label}({}) = zeta({e},{s})({body})", formals.join(", ")));
        }
        Some(format!("{addr} |> [{}]", branches.join(", ")))
    }

    fn body(&mut self, scope: &[String], e: &str, s: &str, depth: usize) -> String {
        let mut parts = Vec::new();
        if self.rng.gen_bool(0.7) {
            // the usual case: the actor keeps its behavior
            if self.take() {
                parts.push(format!("{e} |> {s}"));
            }
        } else if self.rng.gen_bool(0.3) && self.take() {
            let other = scope.choose(&mut self.rng).unwrap();
            parts.push(format!("{other} |> {s}"));
        }
        let extra = self.rng.gen_range(0..=2);
        for _ in 0..extra {
            let item =
                if depth > 0 && self.rng.gen_bool(0.2) { self.actor(scope, depth - 1) } else { self.message(scope) };
            parts.extend(item);
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" || ")
        }
    }
}

/// A random closed term with at most `max_points` program points.
pub fn random_term(seed: u64, max_points: usize) -> String {
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(seed), points: 0, max_points, fresh: 0, handled: Vec::new() };
    let names: Vec<String> = ["a", "b", "c"][..g.rng.gen_range(1..=3)].iter().map(|s| s.to_string()).collect();
    let mut parts = Vec::new();
    let sends = g.rng.gen_range(1..=3).min(max_points);
    // keep room for the initial messages
    g.max_points = max_points - sends;
    for _ in 0..g.rng.gen_range(1..=2) {
        parts.extend(g.actor(&names, 1));
    }
    g.max_points = max_points;
    for _ in 0..sends {
        parts.extend(g.message(&names));
    }
    if parts.is_empty() {
        return "0".to_string();
    }
    format!("nu {}. {}", names.join(", "), parts.join(" || "))
}
