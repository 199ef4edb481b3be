//! The two CAP formal rules, as data.
//!
//! Slots, parameter indices and bound-variable indices are 0-based here:
//! `X_i^k` is `Operand::Param { slot: k - 1, index: i - 1 }`.

use super::extract::InteractionName;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    Static,
    Dynamic,
}

/// Which partial interaction a slot must exhibit. The message arity is
/// left open and must agree across slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    StaticActor,
    DynamicActor,
    Behavior,
    Message,
}

impl Component {
    pub fn matches(self, name: InteractionName) -> bool {
        matches!(
            (self, name),
            (Component::StaticActor, InteractionName::StaticActor(_))
                | (Component::DynamicActor, InteractionName::DynamicActor)
                | (Component::Behavior, InteractionName::Behavior(_))
                | (Component::Message, InteractionName::Message(_))
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operand {
    /// `X_{index+1}^{slot+1}`.
    Param { slot: usize, index: usize },
    /// `I^{slot+1}`: the thread's own point paired with its marker.
    Identity { slot: usize },
    /// `behavior_set(I^{slot+1})`.
    BehaviorSetOf { slot: usize },
}

/// Value passing into the bound variables of slot 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Passing {
    /// `Y_{target+1}^1 <- source`.
    Single { target: usize, source: Operand },
    /// `Y_{first_target+i}^1 <- X_{first_index+i}^{slot+1}` for every
    /// remaining message argument `i`.
    Tail { first_target: usize, slot: usize, first_index: usize },
}

/// How launched threads obtain their marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarkerPolicy {
    /// Copy the marker of the given slot's thread.
    Inherit { slot: usize },
    /// Append the transition label to the marker of the given slot's thread.
    Extend { slot: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalRule {
    pub kind: RuleKind,
    pub components: Vec<Component>,
    pub compatibility: Vec<(Operand, Operand)>,
    pub v_passing: Vec<Passing>,
    pub marker: MarkerPolicy,
    /// The slot whose partial interaction is a behavior branch: its
    /// bound variables receive the passed values and its branch point
    /// names the transition.
    pub handler_slot: usize,
    pub message_slot: usize,
}

impl FormalRule {
    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn static_trans() -> FormalRule {
        use Operand::*;
        FormalRule {
            kind: RuleKind::Static,
            components: vec![Component::StaticActor, Component::Message],
            compatibility: vec![
                (Param { slot: 0, index: 0 }, Param { slot: 1, index: 0 }),
                (Param { slot: 0, index: 1 }, Param { slot: 1, index: 1 }),
            ],
            v_passing: vec![
                Passing::Single { target: 0, source: Param { slot: 0, index: 0 } },
                Passing::Single { target: 1, source: Identity { slot: 0 } },
                Passing::Tail { first_target: 2, slot: 1, first_index: 2 },
            ],
            marker: MarkerPolicy::Inherit { slot: 0 },
            handler_slot: 0,
            message_slot: 1,
        }
    }

    pub fn dynamic_trans() -> FormalRule {
        use Operand::*;
        FormalRule {
            kind: RuleKind::Dynamic,
            components: vec![Component::Behavior, Component::DynamicActor, Component::Message],
            compatibility: vec![
                (Param { slot: 1, index: 0 }, Param { slot: 2, index: 0 }),
                (BehaviorSetOf { slot: 0 }, Param { slot: 1, index: 1 }),
                (Param { slot: 0, index: 0 }, Param { slot: 2, index: 1 }),
            ],
            v_passing: vec![
                Passing::Single { target: 0, source: Param { slot: 1, index: 0 } },
                Passing::Single { target: 1, source: Param { slot: 1, index: 1 } },
                Passing::Tail { first_target: 2, slot: 2, first_index: 2 },
            ],
            // The behavior thread is replicated and keeps its marker
            // forever, so freshness has to come from the consumed actor.
            marker: MarkerPolicy::Extend { slot: 1 },
            handler_slot: 0,
            message_slot: 2,
        }
    }

    pub fn all() -> [FormalRule; 2] {
        [FormalRule::static_trans(), FormalRule::dynamic_trans()]
    }

    /// Expand `v_passing` for a message of arity `n` into
    /// `(bound index, source)` pairs.
    pub fn passing(&self, n: usize) -> Vec<(usize, Operand)> {
        let mut out = Vec::new();
        for p in &self.v_passing {
            match *p {
                Passing::Single { target, source } => out.push((target, source)),
                Passing::Tail { first_target, slot, first_index } => {
                    for i in 0..n {
                        out.push((first_target + i, Operand::Param { slot, index: first_index + i }));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passing_fills_every_bound_variable() {
        for rule in FormalRule::all() {
            for n in 0..4 {
                let targets: Vec<usize> = rule.passing(n).iter().map(|(t, _)| *t).collect();
                assert_eq!(targets, (0..n + 2).collect::<Vec<_>>());
            }
        }
    }
}
