//! Cross-check of an analysis against bounded concrete exploration.

use serde::{Deserialize, Serialize};

use crate::engine::Analysis;
use crate::semantics::{reachable, ExploreError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum AuditOutcome {
    Passed,
    Violation { trace: Vec<String>, detail: String },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub depth: usize,
    /// Distinct (configuration, transition counts) pairs checked.
    pub states: usize,
    pub threads: usize,
    pub outcome: AuditOutcome,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.outcome == AuditOutcome::Passed
    }
}

/// Explore up to `depth` steps and check every reached count vector
/// and every thread environment against the analysis.
pub fn soundness_audit(analysis: &Analysis, depth: usize, state_cap: usize) -> AuditReport {
    let az = &analysis.analyzer;
    let reached = match reachable(az.program(), depth, state_cap) {
        Ok(r) => r,
        Err(ExploreError::BudgetExceeded { cap }) => {
            return AuditReport {
                depth,
                states: cap,
                threads: 0,
                outcome: AuditOutcome::Inconclusive { reason: format!("state budget of {cap} exceeded") },
            }
        }
    };
    let mut threads = 0;
    for r in &reached {
        let trace = || r.trace.iter().map(|t| t.to_string()).collect::<Vec<_>>();
        let x = az.count_vector(r);
        if !analysis.result.occ.contains(&x) {
            let names = az.var_names();
            let shown: Vec<String> =
                names.iter().zip(&x).filter(|(_, &v)| v > 0).map(|(n, v)| format!("{n}={v}")).collect();
            return AuditReport {
                depth,
                states: reached.len(),
                threads,
                outcome: AuditOutcome::Violation {
                    trace: trace(),
                    detail: format!("count vector {{{}}} outside the occurrence abstraction", shown.join(", ")),
                },
            };
        }
        for t in r.config.threads() {
            threads += 1;
            if let Err(e) = analysis.result.cf.atom(t.point).admits(&t.env) {
                return AuditReport {
                    depth,
                    states: reached.len(),
                    threads,
                    outcome: AuditOutcome::Violation { trace: trace(), detail: format!("thread at {}: {e}", t.point) },
                };
            }
        }
    }
    AuditReport { depth, states: reached.len(), threads, outcome: AuditOutcome::Passed }
}
