use super::{Fact, Property, PropertyReport, Verdict, MARKER_CAVEAT};
use crate::engine::Analysis;
use crate::numeric::affine::format_equation;
use crate::numeric::{Bound, CountVar, Q};
use crate::semantics::PointKind;

/// Every point has a finite bound, or is a message point whose count is
/// tied to the number of times it was handled.
pub fn check_bounded(analysis: &Analysis) -> PropertyReport {
    let az = &analysis.analyzer;
    let occ = &analysis.result.occ;
    let names = az.var_names();
    let dim = az.vars().len();
    let mut evidence = Vec::new();
    let mut ok = true;
    let mut messages = Vec::new();

    for info in analysis.program().points() {
        if matches!(info.kind, PointKind::InlineSet { .. }) {
            continue;
        }
        let p = info.point;
        let i = az.point_index(p).unwrap();
        let itv = occ.interval(i);
        evidence.push(Fact::Interval { var: format!("p{p}"), interval: itv.to_string() });
        if info.is_message() {
            messages.push(i);
        }
        if itv.hi() != Some(Bound::Inf) {
            continue;
        }
        if info.is_message() {
            let mut coeffs = vec![Q::from_integer(0.into()); dim];
            coeffs[i] = Q::from_integer(1.into());
            for (k, v) in az.vars().iter().enumerate() {
                if matches!(v, CountVar::Comm { message, .. } if *message == p) {
                    coeffs[k] = Q::from_integer((-1).into());
                }
            }
            if let Some(c) = occ.aff().entailed_constant(&coeffs) {
                let ints: Vec<_> = coeffs.iter().map(|x| x.to_integer()).collect();
                let equation = format_equation(&ints, &c.to_integer(), &names);
                evidence.push(Fact::Balanced { point: p.0, equation });
                continue;
            }
        }
        ok = false;
        evidence.push(Fact::Unbounded { var: format!("p{p}") });
    }
    if let Some((coeffs, d)) = occ.exclusion_certificate(&messages) {
        evidence.push(Fact::Equation { equation: format_equation(&coeffs, &d, &names) });
    }
    PropertyReport {
        property: Property::BoundedResources,
        verdict: if ok { Verdict::Proved } else { Verdict::NotProved },
        evidence,
        caveats: vec![MARKER_CAVEAT.to_string()],
    }
}
