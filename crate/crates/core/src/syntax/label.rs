//! Deterministic program-point and name labeling.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::ast::*;
use super::LabelError;

/// A `nu` binder together with its label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NameInfo {
    pub label: NameLabel,
    pub ident: String,
    /// Human-readable rendering, `@a`, or `@a#2` when several binders
    /// share the identifier.
    pub display: String,
}

/// A term whose actors, messages, branches, inline behavior sets and
/// `nu` binders all carry labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledTerm {
    term: Term,
    names: Vec<NameInfo>,
}

impl LabeledTerm {
    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn names(&self) -> &[NameInfo] {
        &self.names
    }

    pub fn name_info(&self, label: NameLabel) -> Option<&NameInfo> {
        self.names.iter().find(|n| n.label == label)
    }

    /// Render a label: program points as numbers, names as `@ident`.
    pub fn show_label(&self, label: Label) -> String {
        match label {
            Label::Point(p) => p.to_string(),
            Label::Name(n) => self.name_info(n).map(|i| i.display.clone()).unwrap_or_else(|| n.to_string()),
        }
    }

    /// Every program point in source order.
    pub fn points(&self) -> Vec<Point> {
        let mut out = Vec::new();
        walk_points(&self.term, &mut |p| out.push(p));
        out
    }
}

/// Assign labels to every labelable node of `term`.
///
/// Explicit annotations are kept and must be unique per kind; remaining
/// nodes receive the smallest unused number, in source order (left to
/// right, outside in).
pub fn label(term: &Term) -> Result<LabeledTerm, LabelError> {
    let mut used_points = BTreeSet::new();
    let mut used_names = BTreeSet::new();
    collect_explicit(term, &mut used_points, &mut used_names)?;

    let mut st = Labeler { used_points, used_names, next_point: 1, next_name: 1, names: Vec::new() };
    let mut term = term.clone();
    st.term(&mut term);

    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for n in &st.names {
        *counts.entry(n.ident.clone()).or_default() += 1;
    }
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for n in &mut st.names {
        let k = seen.entry(n.ident.clone()).or_default();
        *k += 1;
        n.display = if counts[&n.ident] > 1 { format!("@{}#{}", n.ident, k) } else { format!("@{}", n.ident) };
    }
    Ok(LabeledTerm { term, names: st.names })
}

fn collect_explicit(
    term: &Term,
    points: &mut BTreeSet<Point>,
    names: &mut BTreeSet<NameLabel>,
) -> Result<(), LabelError> {
    let add_point = |p: Option<Point>, points: &mut BTreeSet<Point>| match p {
        Some(p) if !points.insert(p) => Err(LabelError::DuplicatePoint(p)),
        _ => Ok(()),
    };
    match term {
        Term::Empty => Ok(()),
        Term::Restrict { label, body, .. } => {
            if let Some(l) = label {
                if !names.insert(*l) {
                    return Err(LabelError::DuplicateName(*l));
                }
            }
            collect_explicit(body, points, names)
        }
        Term::Par(l, r) => {
            collect_explicit(l, points, names)?;
            collect_explicit(r, points, names)
        }
        Term::Actor { point, behavior, .. } => {
            add_point(*point, points)?;
            if let Behavior::Set(set) = behavior {
                for b in &set.branches {
                    add_point(b.point, points)?;
                    collect_explicit(&b.body, points, names)?;
                }
            }
            Ok(())
        }
        Term::Message { point, args, .. } => {
            add_point(*point, points)?;
            for a in args {
                if let Behavior::Set(set) = a {
                    add_point(set.point, points)?;
                    for b in &set.branches {
                        add_point(b.point, points)?;
                        collect_explicit(&b.body, points, names)?;
                    }
                }
            }
            Ok(())
        }
    }
}

struct Labeler {
    used_points: BTreeSet<Point>,
    used_names: BTreeSet<NameLabel>,
    next_point: u32,
    next_name: u32,
    names: Vec<NameInfo>,
}

impl Labeler {
    fn point(&mut self, slot: &mut Option<Point>) -> Point {
        if let Some(p) = *slot {
            return p;
        }
        while self.used_points.contains(&Point(self.next_point)) {
            self.next_point += 1;
        }
        let p = Point(self.next_point);
        self.used_points.insert(p);
        *slot = Some(p);
        p
    }

    fn name(&mut self, slot: &mut Option<NameLabel>, ident: &str) {
        let l = match *slot {
            Some(l) => l,
            None => {
                while self.used_names.contains(&NameLabel(self.next_name)) {
                    self.next_name += 1;
                }
                let l = NameLabel(self.next_name);
                self.used_names.insert(l);
                *slot = Some(l);
                l
            }
        };
        self.names.push(NameInfo { label: l, ident: ident.to_string(), display: String::new() });
    }

    fn term(&mut self, term: &mut Term) {
        match term {
            Term::Empty => {}
            Term::Restrict { name, label, body } => {
                self.name(label, name);
                self.term(body);
            }
            Term::Par(l, r) => {
                self.term(l);
                self.term(r);
            }
            Term::Actor { point, behavior, .. } => {
                let p = self.point(point);
                if let Behavior::Set(set) = behavior {
                    set.point = Some(p);
                    self.branches(&mut set.branches);
                }
            }
            Term::Message { point, args, .. } => {
                self.point(point);
                for a in args {
                    if let Behavior::Set(set) = a {
                        self.point(&mut set.point);
                        self.branches(&mut set.branches);
                    }
                }
            }
        }
    }

    fn branches(&mut self, branches: &mut [Branch]) {
        for b in branches {
            self.point(&mut b.point);
            self.term(&mut b.body);
        }
    }
}

fn walk_points(term: &Term, f: &mut impl FnMut(Point)) {
    fn set(s: &BehaviorSet, own: bool, f: &mut impl FnMut(Point)) {
        if own {
            if let Some(p) = s.point {
                f(p);
            }
        }
        for b in &s.branches {
            if let Some(p) = b.point {
                f(p);
            }
            walk_points(&b.body, f);
        }
    }
    match term {
        Term::Empty => {}
        Term::Restrict { body, .. } => walk_points(body, f),
        Term::Par(l, r) => {
            walk_points(l, f);
            walk_points(r, f);
        }
        Term::Actor { point, behavior, .. } => {
            if let Some(p) = point {
                f(*p);
            }
            if let Behavior::Set(s) = behavior {
                set(s, false, f);
            }
        }
        Term::Message { point, args, .. } => {
            if let Some(p) = point {
                f(*p);
            }
            for a in args {
                if let Behavior::Set(s) = a {
                    set(s, true, f);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn empty_has_no_labels() {
        let lt = label(&Term::Empty).unwrap();
        assert!(lt.points().is_empty());
        assert!(lt.names().is_empty());
    }

    #[test]
    fn fills_gaps_around_explicit_labels() {
        let t = parse("nu a. a |>^1 [m() = zeta(e,s)(0)] || a <| m()").unwrap();
        let lt = label(&t).unwrap();
        assert_eq!(lt.points(), vec![Point(1), Point(2), Point(3)]);

        let t = parse("nu a. a |> [m^1() = zeta(e,s)(0)] || a <| m()").unwrap();
        let lt = label(&t).unwrap();
        assert_eq!(lt.points(), vec![Point(2), Point(1), Point(3)]);
    }

    #[test]
    fn duplicate_explicit_branch_labels() {
        let t = parse("nu a. a |> [m^2() = zeta(e,s)(0), n^2() = zeta(e,s)(0)]").unwrap();
        assert_eq!(label(&t).unwrap_err(), LabelError::DuplicatePoint(Point(2)));
    }

    #[test]
    fn shadowed_binders_get_distinct_display() {
        let t = parse("nu a. a |> [m() = zeta(e,s)(nu a. a <| m())] || a <| m()").unwrap();
        let lt = label(&t).unwrap();
        let shown: Vec<_> = lt.names().iter().map(|n| n.display.as_str()).collect();
        assert_eq!(shown, vec!["@a#1", "@a#2"]);
    }

    #[test]
    fn stable_across_runs() {
        let src = "nu a, b. a |> [m() = zeta(e,s)(b <| m())] || b |> [m() = zeta(e,s)(0)] || a <| m()";
        let t = parse(src).unwrap();
        assert_eq!(label(&t).unwrap(), label(&t).unwrap());
    }
}
