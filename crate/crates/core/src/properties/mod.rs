//! Property checks over an analysis post-fixpoint.

pub mod audit;
pub mod bounded;
pub mod deadcode;
pub mod linearity;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use audit::{soundness_audit, AuditOutcome, AuditReport};
pub use bounded::check_bounded;
pub use deadcode::check_dead_code;
pub use linearity::{actors_on, check_linearity};

pub const MARKER_CAVEAT: &str = "marker-insensitive control flow";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Linearity,
    BoundedResources,
    DeadCode,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Linearity => "linearity",
            Property::BoundedResources => "bounded-resources",
            Property::DeadCode => "dead-code",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Proved,
    NotProved,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Proved => "proved",
            Verdict::NotProved => "not proved",
        })
    }
}

/// One piece of evidence, checkable against the serialized post-fixpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "fact", rename_all = "snake_case")]
pub enum Fact {
    /// The interval of a counting variable.
    Interval { var: String, interval: String },
    /// An equation entailed by the affine part.
    Equation { equation: String },
    /// Actor points whose address may be the given name.
    AddressActors { name: String, points: Vec<u32> },
    /// Maximum of the sum of counts over `points`.
    MaxSum { points: Vec<u32>, max: String },
    /// An unbounded message point with an entailed balancing equation.
    Balanced { point: u32, equation: String },
    /// A point whose count has no finite bound.
    Unbounded { var: String },
    /// A transition counter stuck at zero.
    DeadTransition { var: String },
    /// A branch that never handles a message.
    DeadBranch { point: u32 },
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts = |v: &[u32]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Fact::Interval { var, interval } => write!(f, "{var} in {interval}"),
            Fact::Equation { equation } => write!(f, "entailed: {equation}"),
            Fact::AddressActors { name, points } => write!(f, "actors on {name}: {{{}}}", pts(points)),
            Fact::MaxSum { points, max } => write!(f, "max sum over {{{}}} = {max}", pts(points)),
            Fact::Balanced { point, equation } => write!(f, "point {point} unbounded but balanced: {equation}"),
            Fact::Unbounded { var } => write!(f, "{var} is unbounded"),
            Fact::DeadTransition { var } => write!(f, "dead transition {var}"),
            Fact::DeadBranch { point } => write!(f, "dead branch {point}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub verdict: Verdict,
    pub evidence: Vec<Fact>,
    pub caveats: Vec<String>,
}

impl PropertyReport {
    pub fn proved(&self) -> bool {
        self.verdict == Verdict::Proved
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.property, self.verdict)?;
        for e in &self.evidence {
            writeln!(f, "  {e}")?;
        }
        for c in &self.caveats {
            writeln!(f, "  caveat: {c}")?;
        }
        Ok(())
    }
}
