//! Concrete execution of the non-standard semantics.

use std::collections::BTreeMap;

use super::config::{Configuration, Env, Marker, Thread, TransLabel, Value};
use super::extract::{Consumption, Param, PartialInteraction, PointKind, Program};
use super::rules::{FormalRule, MarkerPolicy, Operand, RuleKind};
use super::StepError;
use crate::syntax::{Label, Point};

/// A rule instance: which threads fill which slot and which partial
/// interaction each of them exhibits.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interaction {
    pub rule: RuleKind,
    /// Indices into the configuration's sorted thread list, in slot order.
    pub threads: Vec<usize>,
    /// Index of the exhibited partial interaction at each slot's point.
    pub choices: Vec<usize>,
}

/// The result of firing one interaction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepOutcome {
    pub label: TransLabel,
    pub config: Configuration,
    pub launched: Vec<Thread>,
    pub removed: Vec<Thread>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Datum {
    Value(Value),
    Label(String),
}

fn rule(kind: RuleKind) -> FormalRule {
    match kind {
        RuleKind::Static => FormalRule::static_trans(),
        RuleKind::Dynamic => FormalRule::dynamic_trans(),
    }
}

impl Program {
    /// One thread per launched point of the whole term, all with the
    /// empty marker.
    pub fn initial_config(&self) -> Configuration {
        let threads = self
            .init()
            .iter()
            .map(|l| {
                let env = l
                    .static_env
                    .iter()
                    .map(|(k, v)| (k.clone(), Value::new(Label::Name(*v), Marker::empty())))
                    .collect();
                Thread { point: l.point, marker: Marker::empty(), env }
            })
            .collect();
        Configuration::new(threads)
    }

    /// The branch point that handles a message when `thread` takes part
    /// through its `choice`-th partial interaction.
    pub fn branch_point(&self, point: Point, choice: usize) -> Point {
        match &self.point(point).kind {
            PointKind::StaticActor { branches, .. } => branches[choice],
            _ => point,
        }
    }

    fn resolve(&self, op: Operand, threads: &[&Thread], pis: &[&PartialInteraction]) -> Datum {
        match op {
            Operand::Param { slot, index } => match &pis[slot].parameters[index] {
                Param::Var(v) => Datum::Value(threads[slot].env[v].clone()),
                Param::Label(m) => Datum::Label(m.clone()),
                Param::Set(p) => Datum::Value(Value::new(Label::Point(*p), threads[slot].marker.clone())),
            },
            Operand::Identity { slot } => Datum::Value(threads[slot].identity()),
            Operand::BehaviorSetOf { slot } => {
                let id = threads[slot].identity();
                Datum::Value(Value::new(self.behavior_set(id.label), id.marker))
            }
        }
    }

    fn compatible(&self, rule: &FormalRule, threads: &[&Thread], pis: &[&PartialInteraction]) -> bool {
        let arities: Vec<usize> = pis.iter().filter_map(|pi| pi.name.message_arity()).collect();
        if arities.windows(2).any(|w| w[0] != w[1]) {
            return false;
        }
        rule.compatibility.iter().all(|(l, r)| self.resolve(*l, threads, pis) == self.resolve(*r, threads, pis))
    }

    /// Every interaction enabled in `c`. Identical threads are not told
    /// apart: only the first copy of a thread is used in each slot.
    pub fn enabled(&self, c: &Configuration) -> Vec<Interaction> {
        let ts = c.threads();
        let mut out = Vec::new();
        for rule in FormalRule::all() {
            let slots: Vec<Vec<(usize, usize)>> = rule
                .components
                .iter()
                .map(|comp| {
                    let mut v = Vec::new();
                    for (i, t) in ts.iter().enumerate() {
                        if i > 0 && ts[i - 1] == *t {
                            continue;
                        }
                        for (j, pi) in self.point(t.point).interactions.iter().enumerate() {
                            if comp.matches(pi.name) {
                                v.push((i, j));
                            }
                        }
                    }
                    v
                })
                .collect();
            let mut pick = Vec::with_capacity(slots.len());
            self.enumerate(&rule, ts, &slots, &mut pick, &mut out);
        }
        out
    }

    fn enumerate(
        &self,
        rule: &FormalRule,
        ts: &[Thread],
        slots: &[Vec<(usize, usize)>],
        pick: &mut Vec<(usize, usize)>,
        out: &mut Vec<Interaction>,
    ) {
        if pick.len() == slots.len() {
            let threads: Vec<&Thread> = pick.iter().map(|(i, _)| &ts[*i]).collect();
            let pis: Vec<&PartialInteraction> =
                pick.iter().map(|(i, j)| &self.point(ts[*i].point).interactions[*j]).collect();
            if self.compatible(rule, &threads, &pis) {
                out.push(Interaction {
                    rule: rule.kind,
                    threads: pick.iter().map(|(i, _)| *i).collect(),
                    choices: pick.iter().map(|(_, j)| *j).collect(),
                });
            }
            return;
        }
        for &cand in &slots[pick.len()] {
            pick.push(cand);
            self.enumerate(rule, ts, slots, pick, out);
            pick.pop();
        }
    }

    /// The label `i` would carry, without firing it.
    pub fn label_of(&self, c: &Configuration, i: &Interaction) -> TransLabel {
        let rule = rule(i.rule);
        let ts = c.threads();
        let h = i.threads[rule.handler_slot];
        TransLabel {
            rule: i.rule,
            points: i.threads.iter().map(|&k| ts[k].point).collect(),
            branch: self.branch_point(ts[h].point, i.choices[rule.handler_slot]),
        }
    }

    /// Fire `i` in `c`.
    pub fn step(&self, c: &Configuration, i: &Interaction) -> Result<StepOutcome, StepError> {
        let rule = rule(i.rule);
        let ts = c.threads();
        let shape_ok = i.threads.len() == rule.arity()
            && i.choices.len() == rule.arity()
            && i.threads.iter().all(|&k| k < ts.len())
            && i.threads.iter().zip(&i.choices).zip(&rule.components).all(|((&k, &j), comp)| {
                self.point(ts[k].point).interactions.get(j).is_some_and(|pi| comp.matches(pi.name))
            });
        if !shape_ok {
            return Err(StepError::NotEnabled);
        }
        let threads: Vec<&Thread> = i.threads.iter().map(|&k| &ts[k]).collect();
        let pis: Vec<&PartialInteraction> =
            i.threads.iter().zip(&i.choices).map(|(&k, &j)| &self.point(ts[k].point).interactions[j]).collect();
        if !self.compatible(&rule, &threads, &pis) {
            return Err(StepError::NotEnabled);
        }

        let label = self.label_of(c, i);
        let marker = match rule.marker {
            MarkerPolicy::Inherit { slot } => threads[slot].marker.clone(),
            MarkerPolicy::Extend { slot } => threads[slot].marker.extended(label.clone()),
        };
        let n = pis[rule.message_slot].name.message_arity().unwrap_or(0);
        let handler = pis[rule.handler_slot];
        let mut passed: Env = BTreeMap::new();
        for (target, source) in rule.passing(n) {
            match self.resolve(source, &threads, &pis) {
                Datum::Value(v) => {
                    passed.insert(handler.bound[target].clone(), v);
                }
                Datum::Label(_) => return Err(StepError::NotEnabled),
            }
        }

        let mut launched = Vec::new();
        for (slot, pi) in pis.iter().enumerate() {
            let owner = &threads[slot].env;
            let empty = BTreeMap::new();
            let y = if slot == rule.handler_slot { &passed } else { &empty };
            for l in &pi.continuation {
                let mut env = Env::new();
                for v in self.interface(l.point) {
                    let val = if let Some(alpha) = l.static_env.get(v) {
                        Value::new(Label::Name(*alpha), marker.clone())
                    } else if let Some(val) = y.get(v) {
                        val.clone()
                    } else if let Some(val) = owner.get(v) {
                        val.clone()
                    } else {
                        panic!("variable {v} of point {} has no value at launch", l.point);
                    };
                    env.insert(v.clone(), val);
                }
                launched.push(Thread { point: l.point, marker: marker.clone(), env });
            }
        }

        let consumed: Vec<usize> = i
            .threads
            .iter()
            .zip(&pis)
            .filter(|(_, pi)| pi.name.consumption() == Consumption::Consumed)
            .map(|(&k, _)| k)
            .collect();
        let removed = consumed.iter().map(|&k| ts[k].clone()).collect();
        let mut rest = c.remove_indices(&consumed);
        rest.extend(launched.iter().cloned());
        Ok(StepOutcome { label, config: Configuration::new(rest), launched, removed })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_labeled, NameLabel};

    const EXAMPLE: &str = "nu a, b. a |> [m() = zeta(e,s)(a |> s), send(x) = zeta(e,s)(x <| beh(s))] \
                           || a <| send(b) || b |> [beh(x) = zeta(e,s)(e |> x)] || b <| m()";

    fn program() -> Program {
        Program::extract(&parse_labeled(EXAMPLE).unwrap())
    }

    fn name(n: u32) -> Value {
        Value::new(Label::Name(NameLabel(n)), Marker::empty())
    }

    fn pt(p: u32) -> Value {
        Value::new(Label::Point(Point(p)), Marker::empty())
    }

    fn thread(p: u32, env: &[(&str, Value)]) -> Thread {
        Thread {
            point: Point(p),
            marker: Marker::empty(),
            env: env.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        }
    }

    #[test]
    fn initial_configuration_of_the_example() {
        let p = program();
        let expected = Configuration::new(vec![
            thread(1, &[("a", name(1))]),
            thread(2, &[("a", name(1))]),
            thread(4, &[]),
            thread(6, &[("a", name(1)), ("b", name(2))]),
            thread(7, &[("b", name(2))]),
            thread(8, &[]),
            thread(10, &[("b", name(2))]),
        ]);
        assert_eq!(p.initial_config(), expected);
    }

    #[test]
    fn first_step_launches_point_five() {
        let p = program();
        let c0 = p.initial_config();
        let en = p.enabled(&c0);
        assert_eq!(en.len(), 1);
        let out = p.step(&c0, &en[0]).unwrap();
        assert_eq!(out.label.to_string(), "comm(4,6)");
        assert_eq!(out.label.points, vec![Point(1), Point(6)]);
        let expected = Configuration::new(vec![
            thread(2, &[("a", name(1))]),
            thread(4, &[]),
            thread(5, &[("x", name(2)), ("s", pt(1))]),
            thread(7, &[("b", name(2))]),
            thread(8, &[]),
            thread(10, &[("b", name(2))]),
        ]);
        assert_eq!(out.config, expected);
    }

    #[test]
    fn dynamic_step_extends_marker_and_keeps_behavior() {
        let p = program();
        let mut c = p.initial_config();
        for _ in 0..2 {
            let en = p.enabled(&c);
            assert_eq!(en.len(), 1);
            c = p.step(&c, &en[0]).unwrap().config;
        }
        assert!(c.threads().contains(&thread(9, &[("e", name(2)), ("x", pt(1))])));
        let en = p.enabled(&c);
        assert_eq!(en.len(), 1);
        assert_eq!(en[0].rule, RuleKind::Dynamic);
        let out = p.step(&c, &en[0]).unwrap();
        assert_eq!(out.label.points, vec![Point(2), Point(9), Point(10)]);
        assert_eq!(out.label.to_string(), "comm(2,10,9)");
        assert_eq!(out.launched.len(), 1);
        let t3 = &out.launched[0];
        assert_eq!(t3.point, Point(3));
        assert_eq!(t3.marker, Marker(vec![out.label.clone()]));
        assert_eq!(t3.env["a"], name(1));
        assert_eq!(t3.env["s"], pt(1));
        assert_eq!(out.config.count(Point(2)), 1);
    }

    #[test]
    fn lone_message_is_stuck() {
        let p = program();
        let c = Configuration::new(vec![thread(10, &[("b", name(2))])]);
        assert!(p.enabled(&c).is_empty());
    }

    #[test]
    fn step_rejects_incompatible_interaction() {
        let p = program();
        let c0 = p.initial_config();
        // branch m of point 1 against message 6 (label send)
        let bad = Interaction { rule: RuleKind::Static, threads: vec![0, 3], choices: vec![0, 0] };
        assert_eq!(p.step(&c0, &bad), Err(StepError::NotEnabled));
    }
}
