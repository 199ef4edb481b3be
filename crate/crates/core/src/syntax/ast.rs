//! Abstract syntax of CAP configurations.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A program-point label. Actors, messages, behavior branches and inline
/// behavior-set arguments each carry one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub u32);

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A name label, attached to each `nu` binder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NameLabel(pub u32);

impl fmt::Display for NameLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// Either kind of label. Values of the non-standard semantics are labels
/// paired with markers: addresses carry name labels, behavior sets carry
/// program points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    Point(Point),
    Name(NameLabel),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Point(p) => write!(f, "{p}"),
            Label::Name(n) => write!(f, "{n}"),
        }
    }
}

/// What kind of binder an identifier occurrence resolved to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentKind {
    /// Bound by `nu`.
    Name,
    /// Bound by `zeta(e,s)` or by a message formal.
    Var,
}

/// A use-site identifier, resolved against its binder during parsing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ident {
    pub text: String,
    pub kind: IdentKind,
}

impl Ident {
    pub fn name(text: impl Into<String>) -> Self {
        Ident { text: text.into(), kind: IdentKind::Name }
    }

    pub fn var(text: impl Into<String>) -> Self {
        Ident { text: text.into(), kind: IdentKind::Var }
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// A configuration. Labels are `None` until [`crate::syntax::label`] runs,
/// unless the source carried explicit `^n` annotations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Empty,
    Restrict { name: String, label: Option<NameLabel>, body: Box<Term> },
    Par(Box<Term>, Box<Term>),
    Actor { address: Ident, point: Option<Point>, behavior: Behavior },
    Message { address: Ident, point: Option<Point>, label: String, args: Vec<Behavior> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Behavior {
    Var(Ident),
    Set(BehaviorSet),
}

/// A bracketed set of `zeta` branches. When installed by an actor the set
/// shares the actor's program point; as a message argument it has its own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BehaviorSet {
    pub point: Option<Point>,
    pub branches: Vec<Branch>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub label: String,
    pub point: Option<Point>,
    pub formals: Vec<String>,
    pub self_addr: String,
    pub self_beh: String,
    pub body: Term,
}

impl Branch {
    /// Variables bound over the branch body: `e`, `s`, then the formals.
    pub fn bound(&self) -> impl Iterator<Item = &str> {
        [self.self_addr.as_str(), self.self_beh.as_str()].into_iter().chain(self.formals.iter().map(String::as_str))
    }

    pub fn arity(&self) -> usize {
        self.formals.len()
    }
}

impl Term {
    pub fn par(left: Term, right: Term) -> Term {
        Term::Par(Box::new(left), Box::new(right))
    }

    /// Free identifiers bound by `nu` in some enclosing context.
    pub fn free_names(&self) -> BTreeSet<String> {
        self.free_of_kind(IdentKind::Name)
    }

    /// Free identifiers bound by `zeta` or a message formal in some
    /// enclosing context.
    pub fn free_vars(&self) -> BTreeSet<String> {
        self.free_of_kind(IdentKind::Var)
    }

    /// All free identifiers regardless of binder kind.
    pub fn free_idents(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_free(self, None, &mut Vec::new(), &mut out);
        out
    }

    fn free_of_kind(&self, kind: IdentKind) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_free(self, Some(kind), &mut Vec::new(), &mut out);
        out
    }
}

impl Behavior {
    pub fn free_idents(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_free_behavior(self, None, &mut Vec::new(), &mut out);
        out
    }
}

impl BehaviorSet {
    /// Free identifiers of the set as a whole: each branch body minus the
    /// variables that branch binds.
    pub fn free_idents(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for b in &self.branches {
            collect_free_branch(b, None, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl Branch {
    /// The branch interface: free identifiers of the body minus `e`, `s`
    /// and the formals.
    pub fn free_idents(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_free_branch(self, None, &mut Vec::new(), &mut out);
        out
    }
}

fn note<'a>(id: &'a Ident, kind: Option<IdentKind>, bound: &[&'a str], out: &mut BTreeSet<String>) {
    if kind.is_some_and(|k| k != id.kind) {
        return;
    }
    if !bound.contains(&id.text.as_str()) {
        out.insert(id.text.clone());
    }
}

fn collect_free<'a>(term: &'a Term, kind: Option<IdentKind>, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
    match term {
        Term::Empty => {}
        Term::Restrict { name, body, .. } => {
            bound.push(name);
            collect_free(body, kind, bound, out);
            bound.pop();
        }
        Term::Par(l, r) => {
            collect_free(l, kind, bound, out);
            collect_free(r, kind, bound, out);
        }
        Term::Actor { address, behavior, .. } => {
            note(address, kind, bound, out);
            collect_free_behavior(behavior, kind, bound, out);
        }
        Term::Message { address, args, .. } => {
            note(address, kind, bound, out);
            for a in args {
                collect_free_behavior(a, kind, bound, out);
            }
        }
    }
}

fn collect_free_behavior<'a>(
    beh: &'a Behavior,
    kind: Option<IdentKind>,
    bound: &mut Vec<&'a str>,
    out: &mut BTreeSet<String>,
) {
    match beh {
        Behavior::Var(id) => note(id, kind, bound, out),
        Behavior::Set(set) => {
            for b in &set.branches {
                collect_free_branch(b, kind, bound, out);
            }
        }
    }
}

fn collect_free_branch<'a>(
    branch: &'a Branch,
    kind: Option<IdentKind>,
    bound: &mut Vec<&'a str>,
    out: &mut BTreeSet<String>,
) {
    let depth = bound.len();
    bound.extend(branch.bound());
    collect_free(&branch.body, kind, bound, out);
    bound.truncate(depth);
}
