//! Abstract syntax extraction: per program point, its interface and the
//! partial interactions it can exhibit, plus the launch sets produced by
//! the continuation extraction function.

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{Behavior, BehaviorSet, Branch, Ident, Label, LabeledTerm, NameLabel, Point, Term};

/// Partial interaction names. The payload is the message arity `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InteractionName {
    StaticActor(usize),
    DynamicActor,
    Behavior(usize),
    Message(usize),
}

/// Whether a thread survives the interaction it takes part in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Consumption {
    Consumed,
    Replication,
}

impl InteractionName {
    /// (number of parameters, number of bound variables).
    pub fn arity(self) -> (usize, usize) {
        match self {
            InteractionName::StaticActor(n) => (2, n + 2),
            InteractionName::DynamicActor => (2, 0),
            InteractionName::Behavior(n) => (1, n + 2),
            InteractionName::Message(n) => (n + 2, 0),
        }
    }

    pub fn consumption(self) -> Consumption {
        match self {
            InteractionName::Behavior(_) => Consumption::Replication,
            _ => Consumption::Consumed,
        }
    }

    /// The message arity this interaction is indexed by, if any.
    pub fn message_arity(self) -> Option<usize> {
        match self {
            InteractionName::StaticActor(n) | InteractionName::Behavior(n) | InteractionName::Message(n) => Some(n),
            InteractionName::DynamicActor => None,
        }
    }
}

/// A parameter of a partial interaction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    /// A variable of the thread's environment.
    Var(String),
    /// A message label constant.
    Label(String),
    /// An inline behavior set, evaluated to its own program point paired
    /// with the thread's marker.
    Set(Point),
}

/// A synchronization constraint between two variables of one thread.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub left: String,
    pub right: String,
    pub equal: bool,
}

/// A program point to launch together with the name labels of the `nu`
/// binders that scope over it inside the continuation, restricted to the
/// point's interface.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Launch {
    pub point: Point,
    pub static_env: BTreeMap<String, NameLabel>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialInteraction {
    pub name: InteractionName,
    pub parameters: Vec<Param>,
    pub bound: Vec<String>,
    /// Always empty for CAP: compatibility lives in the formal rules.
    pub constraints: Vec<Constraint>,
    pub continuation: Vec<Launch>,
}

impl PartialInteraction {
    /// The message label this interaction is about, when it has one.
    pub fn message_label(&self) -> Option<&str> {
        let idx = match self.name {
            InteractionName::StaticActor(_) | InteractionName::Message(_) => 1,
            InteractionName::Behavior(_) => 0,
            InteractionName::DynamicActor => return None,
        };
        match &self.parameters[idx] {
            Param::Label(l) => Some(l),
            _ => None,
        }
    }
}

/// The syntactic role of a program point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointKind {
    StaticActor {
        address: String,
        branches: Vec<Point>,
    },
    DynamicActor {
        address: String,
        behavior: String,
    },
    Message {
        address: String,
        label: String,
        args: Vec<Param>,
    },
    Branch {
        set: Point,
        label: String,
        formals: Vec<String>,
        self_addr: String,
        self_beh: String,
    },
    /// An inline behavior set passed as a message argument. No thread
    /// ever lives here; the point only serves as a value label.
    InlineSet {
        branches: Vec<Point>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointInfo {
    pub point: Point,
    pub kind: PointKind,
    pub interface: BTreeSet<String>,
    pub interactions: Vec<PartialInteraction>,
}

impl PointInfo {
    pub fn is_actor(&self) -> bool {
        matches!(self.kind, PointKind::StaticActor { .. } | PointKind::DynamicActor { .. })
    }

    pub fn is_message(&self) -> bool {
        matches!(self.kind, PointKind::Message { .. })
    }

    pub fn is_branch(&self) -> bool {
        matches!(self.kind, PointKind::Branch { .. })
    }

    /// The variable holding the actor's address, for actor points.
    pub fn address_var(&self) -> Option<&str> {
        match &self.kind {
            PointKind::StaticActor { address, .. } | PointKind::DynamicActor { address, .. } => Some(address),
            _ => None,
        }
    }
}

/// A labeled term together with everything the semantics needs about it.
#[derive(Clone, Debug)]
pub struct Program {
    term: LabeledTerm,
    points: BTreeMap<Point, PointInfo>,
    init: Vec<Launch>,
}

impl Program {
    /// Build the point table for a labeled, closed term.
    pub fn extract(term: &LabeledTerm) -> Program {
        let mut interfaces = BTreeMap::new();
        compute_interfaces(term.term(), &mut interfaces);
        let mut ex = Extractor { interfaces, points: BTreeMap::new() };
        ex.term(term.term());
        let init = beta(term.term(), &BTreeMap::new(), &ex.interfaces);
        Program { term: term.clone(), points: ex.points, init }
    }

    pub fn labeled(&self) -> &LabeledTerm {
        &self.term
    }

    pub fn points(&self) -> impl Iterator<Item = &PointInfo> {
        self.points.values()
    }

    pub fn point(&self, p: Point) -> &PointInfo {
        self.points.get(&p).unwrap_or_else(|| panic!("unknown program point {p}"))
    }

    pub fn get(&self, p: Point) -> Option<&PointInfo> {
        self.points.get(&p)
    }

    pub fn interface(&self, p: Point) -> &BTreeSet<String> {
        &self.point(p).interface
    }

    /// Launch set of the whole term with an empty static environment.
    pub fn init(&self) -> &[Launch] {
        &self.init
    }

    /// Maps a branch point to the program point of the behavior set that
    /// declares it; identity on any other label.
    pub fn behavior_set(&self, label: Label) -> Label {
        match label {
            Label::Point(p) => match self.points.get(&p).map(|i| &i.kind) {
                Some(PointKind::Branch { set, .. }) => Label::Point(*set),
                _ => label,
            },
            Label::Name(_) => label,
        }
    }

    pub fn show_label(&self, label: Label) -> String {
        self.term.show_label(label)
    }

    /// True when some branch body contains a `nu`, i.e. names can be
    /// created an unbounded number of times.
    pub fn has_nested_restriction(&self) -> bool {
        fn in_term(t: &Term, under_branch: bool) -> bool {
            match t {
                Term::Empty => false,
                Term::Restrict { body, .. } => under_branch || in_term(body, under_branch),
                Term::Par(l, r) => in_term(l, under_branch) || in_term(r, under_branch),
                Term::Actor { behavior, .. } => in_beh(behavior),
                Term::Message { args, .. } => args.iter().any(in_beh),
            }
        }
        fn in_beh(b: &Behavior) -> bool {
            match b {
                Behavior::Var(_) => false,
                Behavior::Set(s) => s.branches.iter().any(|br| in_term(&br.body, true)),
            }
        }
        in_term(self.term.term(), false)
    }
}

/// The continuation extraction function: every program point launched
/// when `config` starts, paired with the static environment in scope at
/// that point restricted to the point's interface.
pub fn beta(
    config: &Term,
    static_env: &BTreeMap<String, NameLabel>,
    interfaces: &BTreeMap<Point, BTreeSet<String>>,
) -> Vec<Launch> {
    let mut out = Vec::new();
    beta_into(config, &mut static_env.clone(), interfaces, &mut out);
    out.sort();
    out
}

fn beta_into(
    config: &Term,
    env: &mut BTreeMap<String, NameLabel>,
    interfaces: &BTreeMap<Point, BTreeSet<String>>,
    out: &mut Vec<Launch>,
) {
    let launch = |p: Point, env: &BTreeMap<String, NameLabel>, out: &mut Vec<Launch>| {
        let iface = &interfaces[&p];
        let static_env = env.iter().filter(|(k, _)| iface.contains(*k)).map(|(k, v)| (k.clone(), *v)).collect();
        out.push(Launch { point: p, static_env });
    };
    match config {
        Term::Empty => {}
        Term::Restrict { name, label, body } => {
            let label = label.expect("term is labeled");
            let prev = env.insert(name.clone(), label);
            beta_into(body, env, interfaces, out);
            match prev {
                Some(v) => env.insert(name.clone(), v),
                None => env.remove(name),
            };
        }
        Term::Par(l, r) => {
            beta_into(l, env, interfaces, out);
            beta_into(r, env, interfaces, out);
        }
        Term::Actor { point, behavior, .. } => {
            launch(point.expect("term is labeled"), env, out);
            if let Behavior::Set(set) = behavior {
                for b in &set.branches {
                    launch(b.point.expect("term is labeled"), env, out);
                }
            }
        }
        Term::Message { point, args, .. } => {
            launch(point.expect("term is labeled"), env, out);
            for a in args {
                if let Behavior::Set(set) = a {
                    for b in &set.branches {
                        launch(b.point.expect("term is labeled"), env, out);
                    }
                }
            }
        }
    }
}

fn compute_interfaces(term: &Term, out: &mut BTreeMap<Point, BTreeSet<String>>) {
    fn set(s: &BehaviorSet, own: Option<Point>, out: &mut BTreeMap<Point, BTreeSet<String>>) {
        if let Some(p) = own {
            out.insert(p, s.free_idents());
        }
        for b in &s.branches {
            out.insert(b.point.expect("term is labeled"), b.free_idents());
            compute_interfaces(&b.body, out);
        }
    }
    match term {
        Term::Empty => {}
        Term::Restrict { body, .. } => compute_interfaces(body, out),
        Term::Par(l, r) => {
            compute_interfaces(l, out);
            compute_interfaces(r, out);
        }
        Term::Actor { address, point, behavior } => {
            let mut iface = behavior.free_idents();
            iface.insert(address.text.clone());
            out.insert(point.expect("term is labeled"), iface);
            if let Behavior::Set(s) = behavior {
                set(s, None, out);
            }
        }
        Term::Message { address, point, args, .. } => {
            let mut iface: BTreeSet<String> = args.iter().flat_map(|a| a.free_idents()).collect();
            iface.insert(address.text.clone());
            out.insert(point.expect("term is labeled"), iface);
            for a in args {
                if let Behavior::Set(s) = a {
                    set(s, s.point, out);
                }
            }
        }
    }
}

struct Extractor {
    interfaces: BTreeMap<Point, BTreeSet<String>>,
    points: BTreeMap<Point, PointInfo>,
}

impl Extractor {
    fn insert(&mut self, point: Point, kind: PointKind, interactions: Vec<PartialInteraction>) {
        let interface = self.interfaces[&point].clone();
        self.points.insert(point, PointInfo { point, kind, interface, interactions });
    }

    fn continuation(&self, b: &Branch) -> Vec<Launch> {
        beta(&b.body, &BTreeMap::new(), &self.interfaces)
    }

    fn bound(b: &Branch) -> Vec<String> {
        b.bound().map(str::to_string).collect()
    }

    fn term(&mut self, term: &Term) {
        match term {
            Term::Empty => {}
            Term::Restrict { body, .. } => self.term(body),
            Term::Par(l, r) => {
                self.term(l);
                self.term(r);
            }
            Term::Actor { address, point, behavior } => {
                let point = point.expect("term is labeled");
                match behavior {
                    Behavior::Var(x) => {
                        let pi = PartialInteraction {
                            name: InteractionName::DynamicActor,
                            parameters: vec![Param::Var(address.text.clone()), Param::Var(x.text.clone())],
                            bound: vec![],
                            constraints: vec![],
                            continuation: vec![],
                        };
                        let kind = PointKind::DynamicActor { address: address.text.clone(), behavior: x.text.clone() };
                        self.insert(point, kind, vec![pi]);
                    }
                    Behavior::Set(set) => {
                        let interactions = set
                            .branches
                            .iter()
                            .map(|b| PartialInteraction {
                                name: InteractionName::StaticActor(b.arity()),
                                parameters: vec![Param::Var(address.text.clone()), Param::Label(b.label.clone())],
                                bound: Self::bound(b),
                                constraints: vec![],
                                continuation: self.continuation(b),
                            })
                            .collect();
                        let kind = PointKind::StaticActor {
                            address: address.text.clone(),
                            branches: set.branches.iter().map(|b| b.point.unwrap()).collect(),
                        };
                        self.insert(point, kind, interactions);
                        self.branches(point, &set.branches);
                    }
                }
            }
            Term::Message { address, point, label, args } => {
                let point = point.expect("term is labeled");
                let arg_params: Vec<Param> = args.iter().map(arg_param).collect();
                let mut parameters = vec![Param::Var(address.text.clone()), Param::Label(label.clone())];
                parameters.extend(arg_params.iter().cloned());
                let pi = PartialInteraction {
                    name: InteractionName::Message(args.len()),
                    parameters,
                    bound: vec![],
                    constraints: vec![],
                    continuation: vec![],
                };
                let kind = PointKind::Message { address: address.text.clone(), label: label.clone(), args: arg_params };
                self.insert(point, kind, vec![pi]);
                for a in args {
                    if let Behavior::Set(set) = a {
                        let sp = set.point.expect("term is labeled");
                        let kind =
                            PointKind::InlineSet { branches: set.branches.iter().map(|b| b.point.unwrap()).collect() };
                        self.insert(sp, kind, vec![]);
                        self.branches(sp, &set.branches);
                    }
                }
            }
        }
    }

    fn branches(&mut self, set: Point, branches: &[Branch]) {
        for b in branches {
            let point = b.point.expect("term is labeled");
            let pi = PartialInteraction {
                name: InteractionName::Behavior(b.arity()),
                parameters: vec![Param::Label(b.label.clone())],
                bound: Self::bound(b),
                constraints: vec![],
                continuation: self.continuation(b),
            };
            let kind = PointKind::Branch {
                set,
                label: b.label.clone(),
                formals: b.formals.clone(),
                self_addr: b.self_addr.clone(),
                self_beh: b.self_beh.clone(),
            };
            self.insert(point, kind, vec![pi]);
            self.term(&b.body);
        }
    }
}

fn arg_param(b: &Behavior) -> Param {
    match b {
        Behavior::Var(Ident { text, .. }) => Param::Var(text.clone()),
        Behavior::Set(s) => Param::Set(s.point.expect("term is labeled")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_labeled;

    #[test]
    fn arities_match_interaction_shapes() {
        let p = Program::extract(
            &parse_labeled("nu a. a |> [m(x, y) = zeta(e,s)(e |> s)] || a <| m(a, a) || a |> [k() = zeta(e,s)(0)]")
                .unwrap(),
        );
        for info in p.points() {
            for pi in &info.interactions {
                let (m, n) = pi.name.arity();
                assert_eq!(pi.parameters.len(), m, "at {}", info.point);
                assert_eq!(pi.bound.len(), n, "at {}", info.point);
            }
        }
    }

    #[test]
    fn inline_set_argument_launches_its_branches() {
        let p = Program::extract(
            &parse_labeled("nu a. a <| m([k() = zeta(e,s)(a <| m(s))]) || a |> [m(x) = zeta(e,s)(e |> x)]").unwrap(),
        );
        let launched: Vec<u32> = p.init().iter().map(|l| l.point.0).collect();
        // 1 message, 2 inline set (not launched), 3 branch k, 4 message inside k,
        // 5 actor, 6 branch m, 7 dynamic actor
        assert_eq!(launched, vec![1, 3, 5, 6]);
        assert_eq!(p.behavior_set(Label::Point(Point(3))), Label::Point(Point(2)));
        assert_eq!(p.point(Point(1)).interactions[0].parameters[2], Param::Set(Point(2)));
    }

    #[test]
    fn nested_restriction_detection() {
        let flat = Program::extract(&parse_labeled("nu a. a <| m()").unwrap());
        assert!(!flat.has_nested_restriction());
        let nested = Program::extract(&parse_labeled("nu a. a |> [m() = zeta(e,s)(nu b. b <| m())]").unwrap());
        assert!(nested.has_nested_restriction());
    }
}
