//! Bounded exhaustive exploration of the concrete semantics.

use std::collections::{BTreeMap, HashSet, VecDeque};

use super::config::{Configuration, TransLabel};
use super::extract::Program;
use super::ExploreError;
use crate::syntax::Point;

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reached {
    pub trace: Vec<TransLabel>,
    pub config: Configuration,
}

impl Reached {
    /// How many times each `(branch, message)` pair fired along the trace.
    pub fn comm_counts(&self) -> BTreeMap<(Point, Point), usize> {
        let mut out = BTreeMap::new();
        for t in &self.trace {
            *out.entry(t.comm()).or_insert(0) += 1;
        }
        out
    }
}

/// Every `(trace, configuration)` pair with a trace of at most
/// `max_steps` transitions, in breadth-first order.
pub fn explore(program: &Program, max_steps: usize, state_cap: usize) -> Result<Vec<Reached>, ExploreError> {
    search(program, max_steps, state_cap, false)
}

/// Like [`explore`], but keeps one representative trace per distinct
/// pair of configuration and transition-count vector.
pub fn reachable(program: &Program, max_steps: usize, state_cap: usize) -> Result<Vec<Reached>, ExploreError> {
    search(program, max_steps, state_cap, true)
}

fn search(program: &Program, max_steps: usize, cap: usize, dedup: bool) -> Result<Vec<Reached>, ExploreError> {
    let init = Reached { trace: Vec::new(), config: program.initial_config() };
    let mut seen = HashSet::new();
    if dedup {
        seen.insert((init.config.clone(), init.comm_counts()));
    }
    let mut out = vec![init];
    let mut frontier: VecDeque<usize> = VecDeque::from([0]);
    while let Some(idx) = frontier.pop_front() {
        if out[idx].trace.len() >= max_steps {
            continue;
        }
        let config = out[idx].config.clone();
        for i in program.enabled(&config) {
            let step = program.step(&config, &i).expect("enabled interaction fires");
            let mut trace = out[idx].trace.clone();
            trace.push(step.label);
            let next = Reached { trace, config: step.config };
            if dedup && !seen.insert((next.config.clone(), next.comm_counts())) {
                continue;
            }
            if out.len() >= cap {
                return Err(ExploreError::BudgetExceeded { cap });
            }
            frontier.push_back(out.len());
            out.push(next);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_labeled;

    fn prog(src: &str) -> Program {
        Program::extract(&parse_labeled(src).unwrap())
    }

    #[test]
    fn depth_zero_is_initial_only() {
        let p = prog("nu a. a <| m() || a |> [m() = zeta(e,s)(e |> s)]");
        let r = explore(&p, 0, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].trace.is_empty());
    }

    #[test]
    fn budget_is_reported() {
        let p = prog("nu a. a <| m() || a |> [m() = zeta(e,s)(e |> s || a <| m() || a <| m())]");
        assert_eq!(explore(&p, 10, 5), Err(ExploreError::BudgetExceeded { cap: 5 }));
    }
}
