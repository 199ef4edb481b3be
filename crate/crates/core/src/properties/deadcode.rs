use super::{Fact, Property, PropertyReport, Verdict, MARKER_CAVEAT};
use crate::engine::Analysis;
use crate::numeric::{Bound, CountVar, Interval};

/// Every transition counter can be non-zero and every branch handles at
/// least one message.
pub fn check_dead_code(analysis: &Analysis) -> PropertyReport {
    let az = &analysis.analyzer;
    let occ = &analysis.result.occ;
    let mut evidence = Vec::new();
    let mut live_branches = Vec::new();
    for (i, v) in az.vars().iter().enumerate() {
        let CountVar::Comm { branch, .. } = v else { continue };
        let itv = occ.interval(i);
        let dead = itv.is_bottom() || itv == Interval::constant(0);
        evidence.push(Fact::Interval { var: v.to_string(), interval: itv.to_string() });
        if dead {
            evidence.push(Fact::DeadTransition { var: v.to_string() });
        } else if itv.hi().is_some_and(|h| h > Bound::Finite(0)) {
            live_branches.push(*branch);
        }
    }
    for info in analysis.program().points().filter(|i| i.is_branch()) {
        if !live_branches.contains(&info.point) {
            evidence.push(Fact::DeadBranch { point: info.point.0 });
        }
    }
    let dead = evidence.iter().any(|f| matches!(f, Fact::DeadTransition { .. } | Fact::DeadBranch { .. }));
    PropertyReport {
        property: Property::DeadCode,
        verdict: if dead { Verdict::NotProved } else { Verdict::Proved },
        evidence,
        caveats: vec![MARKER_CAVEAT.to_string()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{analyze_source, AnalysisOptions};

    #[test]
    fn unsent_message_leaves_branch_dead() {
        let src = "nu a, b. a |> [m() = zeta(e,s)(a |> s), send(x) = zeta(e,s)(x <| beh(s))] \
                   || a <| send(b) || b |> [beh(x) = zeta(e,s)(e |> x)]";
        let a = analyze_source(src, &AnalysisOptions::default()).unwrap();
        let r = check_dead_code(&a);
        assert_eq!(r.verdict, Verdict::NotProved);
        assert!(r.evidence.contains(&Fact::DeadBranch { point: 2 }));
    }

    #[test]
    fn no_transitions_at_all() {
        let a = analyze_source("nu a. a |> [m() = zeta(e,s)(0)] || a <| n()", &AnalysisOptions::default()).unwrap();
        let r = check_dead_code(&a);
        assert_eq!(r.verdict, Verdict::NotProved);
        assert!(r.evidence.contains(&Fact::DeadBranch { point: 2 }));
    }
}
