use std::collections::BTreeSet;

use super::{Fact, Property, PropertyReport, Verdict, MARKER_CAVEAT};
use crate::engine::Analysis;
use crate::numeric::affine::format_equation;
use crate::numeric::Bound;
use crate::syntax::{Label, Point};

/// Actor points whose address label set contains `name`.
pub fn actors_on(analysis: &Analysis, name: Label) -> Vec<Point> {
    let program = analysis.program();
    let mut out = BTreeSet::new();
    for info in program.points().filter(|i| i.is_actor()) {
        let var = info.address_var().unwrap();
        if let Some(v) = analysis.result.cf.atom(info.point).val() {
            if v.values.get(var).is_some_and(|ls| ls.contains(&name)) {
                out.insert(info.point);
            }
        }
    }
    out.into_iter().collect()
}

/// Every address is held by at most one actor at a time.
pub fn check_linearity(analysis: &Analysis) -> PropertyReport {
    let program = analysis.program();
    let az = &analysis.analyzer;
    let occ = &analysis.result.occ;
    let names = az.var_names();
    let mut evidence = Vec::new();
    let mut caveats = vec![MARKER_CAVEAT.to_string()];
    let mut ok = true;
    if program.has_nested_restriction() {
        ok = false;
        caveats.push("names are created inside behavior continuations".to_string());
    }
    for info in program.labeled().names() {
        let s = actors_on(analysis, Label::Name(info.label));
        let pts: Vec<u32> = s.iter().map(|p| p.0).collect();
        evidence.push(Fact::AddressActors { name: info.display.clone(), points: pts.clone() });
        if s.is_empty() {
            continue;
        }
        let idx: Vec<usize> = s.iter().map(|&p| az.point_index(p).unwrap()).collect();
        for (&p, &i) in s.iter().zip(&idx) {
            let itv = occ.interval(i);
            evidence.push(Fact::Interval { var: format!("p{p}"), interval: itv.to_string() });
            if itv.hi().is_some_and(|h| h > Bound::Finite(1)) {
                ok = false;
            }
        }
        let max = occ.max_sum(&idx);
        evidence.push(Fact::MaxSum { points: pts, max: max.to_string() });
        if max > Bound::Finite(1) {
            ok = false;
        }
        if let Some((coeffs, d)) = occ.exclusion_certificate(&idx) {
            evidence.push(Fact::Equation { equation: format_equation(&coeffs, &d, &names) });
        }
    }
    PropertyReport {
        property: Property::Linearity,
        verdict: if ok { Verdict::Proved } else { Verdict::NotProved },
        evidence,
        caveats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{analyze_source, AnalysisOptions};

    #[test]
    fn two_actors_on_one_address() {
        let a = analyze_source("nu a. a |> [ ] || a |> [ ]", &AnalysisOptions::default()).unwrap();
        let r = check_linearity(&a);
        assert_eq!(r.verdict, Verdict::NotProved);
        assert!(r.evidence.contains(&Fact::MaxSum { points: vec![1, 2], max: "2".into() }));
    }

    #[test]
    fn empty_term_is_linear() {
        let a = analyze_source("0", &AnalysisOptions::default()).unwrap();
        assert!(check_linearity(&a).proved());
    }

    #[test]
    fn nested_names_are_not_handled() {
        let a = analyze_source(
            "nu a. a |> [m() = zeta(e,s)(nu b. b |> s || b <| m())] || a <| m()",
            &AnalysisOptions::default(),
        )
        .unwrap();
        let r = check_linearity(&a);
        assert_eq!(r.verdict, Verdict::NotProved);
        assert_eq!(r.caveats.len(), 2);
    }
}
