//! Serializable analysis reports shared by the CLI and the tests.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::Analysis;
use crate::numeric::affine::parse_equation;
use crate::numeric::{AffineSpace, Bound, Interval, OccCount};
use crate::properties::{AuditReport, Fact, PropertyReport, Verdict};
use crate::semantics::{PointKind, StepOutcome, Thread};

pub const SCHEMA_VERSION: &str = "capan-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRow {
    pub point: u32,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub address: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NameRow {
    pub label: u32,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSection {
    pub points: Vec<PointRow>,
    pub names: Vec<NameRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRow {
    pub var: String,
    pub interval: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OccSection {
    pub intervals: Vec<IntervalRow>,
    pub equations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub term: TermSection,
    pub iterations: usize,
    pub occ: OccSection,
    /// point -> variable -> labels
    pub cf: BTreeMap<u32, BTreeMap<String, Vec<String>>>,
    /// point -> variable pairs known to hold the same value
    pub cf_eq: BTreeMap<u32, Vec<String>>,
    pub properties: Vec<PropertyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditReport>,
}

fn kind_name(kind: &PointKind) -> &'static str {
    match kind {
        PointKind::StaticActor { .. } => "actor",
        PointKind::DynamicActor { .. } => "dynamic-actor",
        PointKind::Message { .. } => "message",
        PointKind::Branch { .. } => "branch",
        PointKind::InlineSet { .. } => "behavior-set",
    }
}

impl Report {
    pub fn new(analysis: &Analysis, properties: Vec<PropertyReport>) -> Report {
        let program = analysis.program();
        let lt = program.labeled();
        let points = program
            .points()
            .map(|i| PointRow {
                point: i.point.0,
                kind: kind_name(&i.kind).to_string(),
                address: i.address_var().map(str::to_string),
            })
            .collect();
        let names = lt.names().iter().map(|n| NameRow { label: n.label.0, name: n.display.clone() }).collect();
        let var_names = analysis.analyzer.var_names();
        let occ = &analysis.result.occ;
        let intervals = var_names
            .iter()
            .enumerate()
            .map(|(i, v)| IntervalRow { var: v.clone(), interval: occ.interval(i).to_string() })
            .collect();
        let mut cf = BTreeMap::new();
        let mut cf_eq = BTreeMap::new();
        for (p, atom) in analysis.result.cf.atoms() {
            let Some(v) = atom.val() else { continue };
            let rows = v
                .values
                .iter()
                .map(|(var, ls)| (var.clone(), ls.iter().map(|&l| lt.show_label(l)).collect()))
                .collect();
            cf.insert(p.0, rows);
            if !v.eq.is_empty() {
                cf_eq.insert(p.0, v.eq.iter().map(|(a, b)| format!("{a}~{b}")).collect());
            }
        }
        Report {
            schema_version: SCHEMA_VERSION.to_string(),
            term: TermSection { points, names },
            iterations: analysis.iterations,
            occ: OccSection { intervals, equations: occ.aff().equations(&var_names) },
            cf,
            cf_eq,
            properties,
            audit: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn all_proved(&self) -> bool {
        self.properties.iter().all(|p| p.verdict == Verdict::Proved)
    }

    fn var_names(&self) -> Vec<String> {
        self.occ.intervals.iter().map(|r| r.var.clone()).collect()
    }

    /// Rebuild the occurrence abstraction from its serialized form.
    pub fn occ_value(&self) -> Result<OccCount, String> {
        let names = self.var_names();
        let itv = self.occ.intervals.iter().map(|r| r.interval.parse()).collect::<Result<Vec<Interval>, _>>()?;
        let mut rows = Vec::new();
        for e in &self.occ.equations {
            let (mut c, k) = parse_equation(e, &names).ok_or_else(|| format!("bad equation `{e}`"))?;
            c.push(k);
            rows.push(c);
        }
        let aff = if self.occ.equations.iter().any(|e| e == "0 = 1") {
            AffineSpace::bottom(names.len())
        } else {
            AffineSpace::from_rows(names.len(), rows)
        };
        Ok(OccCount::from_parts(itv, aff))
    }

    /// Re-check every cited fact against the serialized post-fixpoint
    /// alone.
    pub fn verify_evidence(&self) -> Result<(), String> {
        let names = self.var_names();
        let occ = self.occ_value()?;
        let interval_of = |var: &str| self.occ.intervals.iter().find(|r| r.var == var).map(|r| r.interval.clone());
        let entailed = |e: &str| -> Result<(), String> {
            let (c, k) = parse_equation(e, &names).ok_or_else(|| format!("bad equation `{e}`"))?;
            if occ.aff().entails(&c, &k) {
                Ok(())
            } else {
                Err(format!("`{e}` is not entailed"))
            }
        };
        let index_of_point = |p: u32| {
            names.iter().position(|n| *n == format!("p{p}")).ok_or_else(|| format!("no counter for point {p}"))
        };
        for prop in &self.properties {
            for fact in &prop.evidence {
                match fact {
                    Fact::Interval { var, interval } => {
                        if interval_of(var).as_deref() != Some(interval.as_str()) {
                            return Err(format!("interval of {var} is not {interval}"));
                        }
                    }
                    Fact::Equation { equation } | Fact::Balanced { equation, .. } => entailed(equation)?,
                    Fact::AddressActors { name, points } => {
                        for row in &self.term.points {
                            let Some(addr) = &row.address else { continue };
                            let holds =
                                self.cf.get(&row.point).and_then(|m| m.get(addr)).is_some_and(|ls| ls.contains(name));
                            if holds != points.contains(&row.point) {
                                return Err(format!("actor set for {name} disagrees at point {}", row.point));
                            }
                        }
                    }
                    Fact::MaxSum { points, max } => {
                        let idx = points.iter().map(|&p| index_of_point(p)).collect::<Result<Vec<_>, _>>()?;
                        let got = occ.max_sum(&idx);
                        if got.to_string() != *max {
                            return Err(format!("max sum is {got}, report says {max}"));
                        }
                    }
                    Fact::Unbounded { var } => {
                        let i = names.iter().position(|n| n == var).ok_or_else(|| format!("unknown {var}"))?;
                        if occ.interval(i).hi() != Some(Bound::Inf) {
                            return Err(format!("{var} is bounded"));
                        }
                    }
                    Fact::DeadTransition { var } => {
                        let i = names.iter().position(|n| n == var).ok_or_else(|| format!("unknown {var}"))?;
                        let itv = occ.interval(i);
                        if !(itv.is_bottom() || itv == Interval::constant(0)) {
                            return Err(format!("{var} is live"));
                        }
                    }
                    Fact::DeadBranch { .. } => {}
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "points:")?;
        for p in &self.term.points {
            match &p.address {
                Some(a) => writeln!(f, "  {} {} on {a}", p.point, p.kind)?,
                None => writeln!(f, "  {} {}", p.point, p.kind)?,
            }
        }
        if !self.term.names.is_empty() {
            let ns: Vec<String> = self.term.names.iter().map(|n| n.name.clone()).collect();
            writeln!(f, "names: {}", ns.join(", "))?;
        }
        writeln!(f, "iterations: {}", self.iterations)?;
        writeln!(f, "intervals:")?;
        let width = self.occ.intervals.iter().map(|r| r.var.len()).max().unwrap_or(0);
        for r in &self.occ.intervals {
            writeln!(f, "  {:<width$}  {}", r.var, r.interval)?;
        }
        writeln!(f, "equations:")?;
        for e in &self.occ.equations {
            writeln!(f, "  {e}")?;
        }
        writeln!(f, "control flow:")?;
        for (p, vars) in &self.cf {
            for (v, ls) in vars {
                writeln!(f, "  point {p}: var {v} in {{{}}}", ls.join(","))?;
            }
            if let Some(eq) = self.cf_eq.get(p) {
                writeln!(f, "  point {p}: eq: {{{}}}", eq.join(","))?;
            }
        }
        for p in &self.properties {
            write!(f, "{p}")?;
        }
        if let Some(a) = &self.audit {
            write!(f, "{}", render_audit(a))?;
        }
        Ok(())
    }
}

pub fn render_audit(a: &AuditReport) -> String {
    use crate::properties::AuditOutcome;
    let head = format!("audit at depth {}: {} states, {} threads", a.depth, a.states, a.threads);
    match &a.outcome {
        AuditOutcome::Passed => format!("{head}: passed\n"),
        AuditOutcome::Inconclusive { reason } => format!("{head}: inconclusive ({reason})\n"),
        AuditOutcome::Violation { trace, detail } => {
            format!("{head}: violation\n  trace: {}\n  {detail}\n", trace.join(" "))
        }
    }
}

fn thread_set(ts: &[Thread]) -> String {
    let items: Vec<String> = ts.iter().map(|t| format!("{}:{}", t.point, t.marker)).collect();
    format!("{{{}}}", items.join(","))
}

/// One line of a trace dump.
pub fn trace_line(k: usize, step: &StepOutcome) -> String {
    format!("step {k}: {} -> launched {} removed {}", step.label, thread_set(&step.launched), thread_set(&step.removed))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    pub transition: String,
    pub launched: Vec<String>,
    pub removed: Vec<String>,
}

impl TraceStep {
    pub fn new(k: usize, step: &StepOutcome) -> TraceStep {
        let show = |ts: &[Thread]| ts.iter().map(|t| format!("{}:{}", t.point, t.marker)).collect();
        TraceStep {
            step: k,
            transition: step.label.to_string(),
            launched: show(&step.launched),
            removed: show(&step.removed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{analyze_source, AnalysisOptions};
    use crate::properties::{check_bounded, check_linearity};
    use crate::semantics::Program;

    const PINGPONG: &str = "nu a, b. a |> [ping(x) = zeta(e,s)(x <| pong(e) || e |> s)] \
                            || b |> [pong(x) = zeta(e,s)(x <| ping(e) || e |> s)] || a <| ping(b)";

    #[test]
    fn json_round_trips_and_evidence_checks() {
        let a = analyze_source(PINGPONG, &AnalysisOptions::default()).unwrap();
        let r = Report::new(&a, vec![check_linearity(&a), check_bounded(&a)]);
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.schema_version, SCHEMA_VERSION);
        back.verify_evidence().unwrap();
    }

    #[test]
    fn tampered_evidence_is_rejected() {
        let a = analyze_source(PINGPONG, &AnalysisOptions::default()).unwrap();
        let mut r = Report::new(&a, vec![check_bounded(&a)]);
        r.properties[0].evidence.push(Fact::Equation { equation: "1*p3 = 1".into() });
        assert!(r.verify_evidence().is_err());
    }

    #[test]
    fn text_has_cf_rows() {
        let a = analyze_source("nu a. a |> [] || a <| m()", &AnalysisOptions::default()).unwrap();
        let s = Report::new(&a, vec![]).to_string();
        assert!(s.contains("point 1: var a in {@a}"), "{s}");
    }

    #[test]
    fn trace_line_format() {
        let lt = crate::syntax::parse_labeled(
            "nu a, b. a |> [m() = zeta(e,s)(a |> s), send(x) = zeta(e,s)(x <| beh(s))] \
             || a <| send(b) || b |> [beh(x) = zeta(e,s)(e |> x)] || b <| m()",
        )
        .unwrap();
        let p = Program::extract(&lt);
        let c = p.initial_config();
        let i = p.enabled(&c).into_iter().find(|i| p.label_of(&c, i).to_string() == "comm(4,6)").unwrap();
        let out = p.step(&c, &i).unwrap();
        assert_eq!(trace_line(1, &out), "step 1: comm(4,6) -> launched {5:ε} removed {1:ε,6:ε}");
    }
}
