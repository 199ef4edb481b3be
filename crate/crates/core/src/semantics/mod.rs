//! Non-standard semantics: threads, partial interactions, formal rules,
//! and a bounded explorer.

pub mod config;
pub mod exec;
pub mod explore;
pub mod extract;
pub mod rules;

pub use config::{Configuration, Env, Marker, Thread, TransLabel, Value};
pub use exec::{Interaction, StepOutcome};
pub use explore::{explore, reachable, Reached, DEFAULT_STATE_CAP};
pub use extract::{
    beta, Consumption, InteractionName, Launch, Param, PartialInteraction, PointInfo, PointKind, Program,
};
pub use rules::{Component, FormalRule, MarkerPolicy, Operand, Passing, RuleKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("interaction is not enabled in this configuration")]
    NotEnabled,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExploreError {
    #[error("state budget of {cap} exceeded")]
    BudgetExceeded { cap: usize },
}
