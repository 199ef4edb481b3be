//! Control-flow domain: one atom per program point.

pub mod atom;
pub mod molecule;

use std::collections::BTreeMap;

pub use atom::{Atom, AtomVal, LabelSet};
pub use molecule::{cf_transfer, launch_abs, marker_value, reagents_abs, Molecule};

use crate::semantics::{PointKind, Program};
use crate::syntax::{Label, Point};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CfState {
    atoms: BTreeMap<Point, Atom>,
}

impl CfState {
    /// Every thread-hosting point of `program` mapped to bottom.
    pub fn bottom(program: &Program) -> CfState {
        let atoms = program
            .points()
            .filter(|i| !matches!(i.kind, PointKind::InlineSet { .. }))
            .map(|i| (i.point, Atom::Bottom))
            .collect();
        CfState { atoms }
    }

    /// Singleton label sets from the static environments of the initial
    /// launch; bottom elsewhere.
    pub fn init(program: &Program) -> CfState {
        let mut cf = CfState::bottom(program);
        for l in program.init() {
            let atom = Atom::singletons(l.static_env.iter().map(|(k, v)| (k.clone(), Label::Name(*v))));
            cf.join_at(l.point, &atom);
        }
        cf
    }

    pub fn atom(&self, p: Point) -> &Atom {
        self.atoms.get(&p).unwrap_or(&Atom::Bottom)
    }

    pub fn atoms(&self) -> &BTreeMap<Point, Atom> {
        &self.atoms
    }

    pub fn join_at(&mut self, p: Point, atom: &Atom) {
        let cur = self.atoms.entry(p).or_insert(Atom::Bottom);
        *cur = cur.join(atom);
    }

    pub fn join(&self, other: &CfState) -> CfState {
        let mut out = self.clone();
        for (p, a) in &other.atoms {
            out.join_at(*p, a);
        }
        out
    }

    pub fn leq(&self, other: &CfState) -> bool {
        self.atoms.iter().all(|(p, a)| a.leq(other.atom(*p)))
    }

    pub fn is_bottom(&self) -> bool {
        self.atoms.values().all(Atom::is_bottom)
    }

    /// Replace one point's atom, as when corrupting a result for negative tests.
    pub fn set(&mut self, p: Point, atom: Atom) {
        self.atoms.insert(p, atom);
    }
}
