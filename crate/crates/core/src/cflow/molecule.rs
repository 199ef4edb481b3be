//! Joint abstract state of the threads taking part in one interaction.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::atom::{Atom, LabelSet};
use super::CfState;
use crate::semantics::{FormalRule, Operand, Param, PartialInteraction, Program};
use crate::syntax::{Label, Point};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum MolVar {
    Env(usize, String),
    Identity(usize),
    Bound(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Resolved {
    Node(usize),
    Const(String),
}

/// Union-find over value nodes, each class carrying its possible labels.
#[derive(Clone, Debug)]
pub struct Molecule {
    parent: Vec<usize>,
    labels: Vec<LabelSet>,
    vars: HashMap<MolVar, usize>,
    neq: Vec<(usize, usize)>,
    points: Vec<Point>,
    choices: Vec<usize>,
}

impl Molecule {
    fn node(&mut self, labels: LabelSet) -> usize {
        self.parent.push(self.parent.len());
        self.labels.push(labels);
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merge two classes; `false` when their label sets do not meet.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return true;
        }
        let meet: LabelSet = self.labels[a].intersection(&self.labels[b]).copied().collect();
        self.parent[b] = a;
        let empty = meet.is_empty();
        self.labels[a] = meet;
        !empty
    }

    fn class_labels(&mut self, x: usize) -> LabelSet {
        let r = self.find(x);
        self.labels[r].clone()
    }

    fn operand(&mut self, program: &Program, op: Operand, pis: &[&PartialInteraction]) -> Resolved {
        match op {
            Operand::Param { slot, index } => match &pis[slot].parameters[index] {
                Param::Var(v) => Resolved::Node(self.vars[&MolVar::Env(slot, v.clone())]),
                Param::Label(m) => Resolved::Const(m.clone()),
                Param::Set(p) => Resolved::Node(self.node(BTreeSet::from([Label::Point(*p)]))),
            },
            Operand::Identity { slot } => Resolved::Node(self.vars[&MolVar::Identity(slot)]),
            Operand::BehaviorSetOf { slot } => {
                let set = program.behavior_set(Label::Point(self.points[slot]));
                Resolved::Node(self.node(BTreeSet::from([set])))
            }
        }
    }
}

/// Conjoin the atoms of the interacting points and impose the rule's
/// compatibility equations. `None` when unsatisfiable.
pub fn reagents_abs(
    program: &Program,
    rule: &FormalRule,
    points: &[Point],
    choices: &[usize],
    cf: &CfState,
) -> Option<Molecule> {
    let mut mol = Molecule {
        parent: Vec::new(),
        labels: Vec::new(),
        vars: HashMap::new(),
        neq: Vec::new(),
        points: points.to_vec(),
        choices: choices.to_vec(),
    };
    for (slot, &p) in points.iter().enumerate() {
        let atom = cf.atom(p).val()?;
        for (v, ls) in &atom.values {
            let n = mol.node(ls.clone());
            mol.vars.insert(MolVar::Env(slot, v.clone()), n);
        }
        for (u, v) in &atom.eq {
            let (a, b) = (mol.vars[&MolVar::Env(slot, u.clone())], mol.vars[&MolVar::Env(slot, v.clone())]);
            if !mol.union(a, b) {
                return None;
            }
        }
        for (u, v) in &atom.neq {
            let pair = (mol.vars[&MolVar::Env(slot, u.clone())], mol.vars[&MolVar::Env(slot, v.clone())]);
            mol.neq.push(pair);
        }
        let id = mol.node(BTreeSet::from([Label::Point(p)]));
        mol.vars.insert(MolVar::Identity(slot), id);
    }
    let pis = interactions(program, points, choices);
    let arities: Vec<usize> = pis.iter().filter_map(|pi| pi.name.message_arity()).collect();
    if arities.windows(2).any(|w| w[0] != w[1]) {
        return None;
    }
    for &(l, r) in &rule.compatibility {
        let l = mol.operand(program, l, &pis);
        let r = mol.operand(program, r, &pis);
        let ok = match (l, r) {
            (Resolved::Node(a), Resolved::Node(b)) => mol.union(a, b),
            (Resolved::Const(a), Resolved::Const(b)) => a == b,
            _ => false,
        };
        if !ok {
            return None;
        }
    }
    for (a, b) in mol.neq.clone() {
        if mol.find(a) == mol.find(b) {
            return None;
        }
    }
    Some(mol)
}

fn interactions<'p>(program: &'p Program, points: &[Point], choices: &[usize]) -> Vec<&'p PartialInteraction> {
    points.iter().zip(choices).map(|(&p, &j)| &program.point(p).interactions[j]).collect()
}

/// Bind the handler's bound variables to the passed values.
pub fn marker_value(program: &Program, rule: &FormalRule, mut mol: Molecule) -> Option<Molecule> {
    let pis = interactions(program, &mol.points, &mol.choices);
    let n = pis[rule.message_slot].name.message_arity().unwrap_or(0);
    let handler = pis[rule.handler_slot];
    for (target, source) in rule.passing(n) {
        match mol.operand(program, source, &pis) {
            Resolved::Node(x) => {
                mol.vars.insert(MolVar::Bound(handler.bound[target].clone()), x);
            }
            Resolved::Const(_) => return None,
        }
    }
    Some(mol)
}

/// The atoms of every thread the interaction launches.
pub fn launch_abs(program: &Program, rule: &FormalRule, mut mol: Molecule) -> Vec<(Point, Atom)> {
    let pis = interactions(program, &mol.points, &mol.choices);
    let mut out = Vec::new();
    for (slot, pi) in pis.iter().enumerate() {
        for l in &pi.continuation {
            let mut vars: BTreeMap<String, (usize, LabelSet)> = BTreeMap::new();
            for v in program.interface(l.point) {
                let node = if let Some(alpha) = l.static_env.get(v) {
                    mol.node(BTreeSet::from([Label::Name(*alpha)]))
                } else if let Some(&x) =
                    (slot == rule.handler_slot).then(|| mol.vars.get(&MolVar::Bound(v.clone()))).flatten()
                {
                    x
                } else {
                    mol.vars[&MolVar::Env(slot, v.clone())]
                };
                let root = mol.find(node);
                let ls = mol.class_labels(root);
                vars.insert(v.clone(), (root, ls));
            }
            out.push((l.point, Atom::from_classes(&vars)));
        }
    }
    out
}

/// Full control-flow transfer of one abstract transition.
pub fn cf_transfer(
    program: &Program,
    rule: &FormalRule,
    points: &[Point],
    choices: &[usize],
    cf: &CfState,
) -> Option<Vec<(Point, Atom)>> {
    let mol = reagents_abs(program, rule, points, choices, cf)?;
    let mol = marker_value(program, rule, mol)?;
    Some(launch_abs(program, rule, mol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_labeled, NameLabel};

    const EXAMPLE: &str = "nu a, b. a |> [m() = zeta(e,s)(a |> s), send(x) = zeta(e,s)(x <| beh(s))] \
                           || a <| send(b) || b |> [beh(x) = zeta(e,s)(e |> x)] || b <| m()";

    #[test]
    fn first_step_launches_five() {
        let p = Program::extract(&parse_labeled(EXAMPLE).unwrap());
        let cf = CfState::init(&p);
        let rule = FormalRule::static_trans();
        let out = cf_transfer(&p, &rule, &[Point(1), Point(6)], &[1, 0], &cf).unwrap();
        assert_eq!(out.len(), 1);
        let (pt, atom) = &out[0];
        assert_eq!(*pt, Point(5));
        let v = atom.val().unwrap();
        assert_eq!(v.values["x"], BTreeSet::from([Label::Name(NameLabel(2))]));
        assert_eq!(v.values["s"], BTreeSet::from([Label::Point(Point(1))]));
    }

    #[test]
    fn label_mismatch_blocks() {
        let p = Program::extract(&parse_labeled(EXAMPLE).unwrap());
        let cf = CfState::init(&p);
        let rule = FormalRule::static_trans();
        assert!(reagents_abs(&p, &rule, &[Point(1), Point(6)], &[0, 0], &cf).is_none());
    }

    #[test]
    fn address_mismatch_blocks() {
        let p = Program::extract(&parse_labeled(EXAMPLE).unwrap());
        let cf = CfState::init(&p);
        let rule = FormalRule::static_trans();
        assert!(reagents_abs(&p, &rule, &[Point(1), Point(10)], &[0, 0], &cf).is_none());
    }

    #[test]
    fn bottom_atom_blocks() {
        let p = Program::extract(&parse_labeled(EXAMPLE).unwrap());
        let cf = CfState::init(&p);
        // point 9 is not initially reachable
        let rule = FormalRule::dynamic_trans();
        assert!(reagents_abs(&p, &rule, &[Point(2), Point(9), Point(10)], &[0, 0, 0], &cf).is_none());
    }

    #[test]
    fn dynamic_passing_uses_actor_behavior() {
        let src = "nu a. a |> [go() = zeta(e,s)(e |> s)] || a <| go() || a <| go()";
        let p = Program::extract(&parse_labeled(src).unwrap());
        let mut cf = CfState::init(&p);
        let st = cf_transfer(&p, &FormalRule::static_trans(), &[Point(1), Point(4)], &[0, 0], &cf).unwrap();
        for (pt, a) in st {
            cf.join_at(pt, &a);
        }
        let dy =
            cf_transfer(&p, &FormalRule::dynamic_trans(), &[Point(2), Point(3), Point(5)], &[0, 0, 0], &cf).unwrap();
        let v = dy[0].1.val().unwrap();
        assert_eq!(v.values["s"], BTreeSet::from([Label::Point(Point(1))]));
        assert_eq!(v.values["e"], BTreeSet::from([Label::Name(NameLabel(1))]));
    }
}
