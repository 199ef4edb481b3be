use std::collections::{BTreeMap, BTreeSet};

use crate::semantics::Env;
use crate::syntax::Label;

pub type LabelSet = BTreeSet<Label>;

/// Abstract values of one program point's interface variables. Markers
/// are not tracked.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Bottom,
    Val(AtomVal),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AtomVal {
    pub values: BTreeMap<String, LabelSet>,
    /// Pairs `(u, v)` with `u < v` that must hold equal values.
    pub eq: BTreeSet<(String, String)>,
    /// Pairs `(u, v)` with `u < v` that must hold different values.
    pub neq: BTreeSet<(String, String)>,
}

impl Atom {
    /// Build from variables grouped into equality classes.
    pub fn from_classes(vars: &BTreeMap<String, (usize, LabelSet)>) -> Atom {
        let mut a = AtomVal::default();
        for (v, (_, labels)) in vars {
            if labels.is_empty() {
                return Atom::Bottom;
            }
            a.values.insert(v.clone(), labels.clone());
        }
        for (u, (cu, lu)) in vars {
            for (v, (cv, lv)) in vars.range::<String, _>((std::ops::Bound::Excluded(u), std::ops::Bound::Unbounded)) {
                if cu == cv {
                    a.eq.insert((u.clone(), v.clone()));
                } else if lu.is_disjoint(lv) {
                    a.neq.insert((u.clone(), v.clone()));
                }
            }
        }
        Atom::Val(a)
    }

    /// Singleton label sets with no relations; the empty map gives the
    /// atom of a reachable point with an empty interface.
    pub fn singletons(values: impl IntoIterator<Item = (String, Label)>) -> Atom {
        let vars: BTreeMap<String, (usize, LabelSet)> =
            values.into_iter().enumerate().map(|(i, (v, l))| (v, (i, BTreeSet::from([l])))).collect();
        Atom::from_classes(&vars)
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Atom::Bottom)
    }

    pub fn val(&self) -> Option<&AtomVal> {
        match self {
            Atom::Val(v) => Some(v),
            Atom::Bottom => None,
        }
    }

    /// Label-set union; relations survive only when both sides have them.
    pub fn join(&self, other: &Atom) -> Atom {
        match (self, other) {
            (Atom::Bottom, x) | (x, Atom::Bottom) => x.clone(),
            (Atom::Val(a), Atom::Val(b)) => {
                let mut values = a.values.clone();
                for (k, ls) in &b.values {
                    values.entry(k.clone()).or_default().extend(ls.iter().copied());
                }
                Atom::Val(AtomVal {
                    values,
                    eq: a.eq.intersection(&b.eq).cloned().collect(),
                    neq: a.neq.intersection(&b.neq).cloned().collect(),
                })
            }
        }
    }

    pub fn leq(&self, other: &Atom) -> bool {
        match (self, other) {
            (Atom::Bottom, _) => true,
            (_, Atom::Bottom) => false,
            (Atom::Val(a), Atom::Val(b)) => {
                a.values.iter().all(|(k, ls)| b.values.get(k).is_some_and(|bl| ls.is_subset(bl)))
                    && b.eq.is_subset(&a.eq)
                    && b.neq.is_subset(&a.neq)
            }
        }
    }

    /// Whether a concrete environment is described by this atom.
    pub fn admits(&self, env: &Env) -> Result<(), String> {
        let Atom::Val(a) = self else { return Err("point is unreachable in the analysis".into()) };
        for (v, val) in env {
            match a.values.get(v) {
                Some(ls) if ls.contains(&val.label) => {}
                _ => return Err(format!("variable {v} holds a label outside its set")),
            }
        }
        for (u, v) in &a.eq {
            if env.get(u) != env.get(v) {
                return Err(format!("{u} and {v} should be equal"));
            }
        }
        for (u, v) in &a.neq {
            if env.get(u) == env.get(v) {
                return Err(format!("{u} and {v} should differ"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::NameLabel;

    fn n(i: u32) -> Label {
        Label::Name(NameLabel(i))
    }

    #[test]
    fn join_unions_labels() {
        let a = Atom::singletons([("a".to_string(), n(1))]);
        let b = Atom::singletons([("a".to_string(), n(2))]);
        let j = a.join(&b);
        assert_eq!(j.val().unwrap().values["a"], BTreeSet::from([n(1), n(2)]));
        assert_eq!(a.join(&Atom::Bottom), a);
    }

    #[test]
    fn eq_in_one_operand_is_dropped() {
        let mut vars = BTreeMap::new();
        vars.insert("x".to_string(), (0, BTreeSet::from([n(1)])));
        vars.insert("y".to_string(), (0, BTreeSet::from([n(1)])));
        let with_eq = Atom::from_classes(&vars);
        vars.get_mut("y").unwrap().0 = 1;
        let without = Atom::from_classes(&vars);
        assert_eq!(with_eq.val().unwrap().eq.len(), 1);
        assert!(with_eq.join(&without).val().unwrap().eq.is_empty());
        assert!(with_eq.leq(&without));
        assert!(!without.leq(&with_eq));
    }
}
