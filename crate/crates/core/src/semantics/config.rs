use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::rules::RuleKind;
use crate::syntax::{Label, Point};

/// The label of a concrete transition: the rule and the interacting
/// points in slot order, plus the branch point that handled the message.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TransLabel {
    pub rule: RuleKind,
    pub points: Vec<Point>,
    pub branch: Point,
}

impl TransLabel {
    pub fn message(&self) -> Point {
        *self.points.last().expect("transition has a message slot")
    }

    /// For the dynamic rule, the dynamic actor point.
    pub fn actor(&self) -> Point {
        match self.rule {
            RuleKind::Static => self.points[0],
            RuleKind::Dynamic => self.points[1],
        }
    }

    /// `(branch, message)`: the counter this transition increments.
    pub fn comm(&self) -> (Point, Point) {
        (self.branch, self.message())
    }
}

impl fmt::Display for TransLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rule {
            RuleKind::Static => write!(f, "comm({},{})", self.branch, self.message()),
            RuleKind::Dynamic => {
                write!(f, "comm({},{},{})", self.branch, self.message(), self.actor())
            }
        }
    }
}

/// A word of transition labels; `ε` when empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Marker(pub Vec<TransLabel>);

impl Marker {
    pub fn empty() -> Marker {
        Marker(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn extended(&self, t: TransLabel) -> Marker {
        let mut w = self.0.clone();
        w.push(t);
        Marker(w)
    }
}

impl fmt::Display for Marker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Value {
    pub label: Label,
    pub marker: Marker,
}

impl Value {
    pub fn new(label: Label, marker: Marker) -> Value {
        Value { label, marker }
    }
}

pub type Env = BTreeMap<String, Value>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Thread {
    pub point: Point,
    pub marker: Marker,
    pub env: Env,
}

impl Thread {
    pub fn identity(&self) -> Value {
        Value::new(Label::Point(self.point), self.marker.clone())
    }
}

/// A multiset of threads, kept sorted so equal multisets compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Configuration {
    threads: Vec<Thread>,
}

impl Configuration {
    pub fn new(mut threads: Vec<Thread>) -> Configuration {
        threads.sort();
        Configuration { threads }
    }

    pub fn threads(&self) -> &[Thread] {
        &self.threads
    }

    pub fn len(&self) -> usize {
        self.threads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.threads.is_empty()
    }

    /// Number of threads at `p`.
    pub fn count(&self, p: Point) -> usize {
        self.threads.iter().filter(|t| t.point == p).count()
    }

    /// Thread multiplicity per program point.
    pub fn counts(&self) -> BTreeMap<Point, usize> {
        let mut out = BTreeMap::new();
        for t in &self.threads {
            *out.entry(t.point).or_insert(0) += 1;
        }
        out
    }

    pub(crate) fn remove_indices(&self, idx: &[usize]) -> Vec<Thread> {
        self.threads.iter().enumerate().filter(|(i, _)| !idx.contains(i)).map(|(_, t)| t.clone()).collect()
    }
}
