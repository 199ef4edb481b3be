use std::collections::BTreeSet;

use capan_core::generate::random_term;
use capan_core::syntax::{parse, parse_labeled, pretty, FrontendError, ParseError};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pretty_then_parse_is_identity(seed in any::<u64>()) {
        let t = parse(&random_term(seed, 12)).unwrap();
        let printed = pretty(&t, false);
        prop_assert_eq!(parse(&printed).unwrap(), t);
        // reparsing is stable up to whitespace
        let squashed: String = printed.split_whitespace().collect::<Vec<_>>().join("  ");
        prop_assert_eq!(parse(&squashed).unwrap(), parse(&printed).unwrap());
    }

    #[test]
    fn labels_are_injective_and_stable(seed in any::<u64>()) {
        let src = random_term(seed, 12);
        let a = parse_labeled(&src).unwrap();
        let b = parse_labeled(&src).unwrap();
        let pts = a.points();
        prop_assert_eq!(pts.iter().collect::<BTreeSet<_>>().len(), pts.len());
        let names: BTreeSet<_> = a.names().iter().map(|n| n.label).collect();
        prop_assert_eq!(names.len(), a.names().len());
        prop_assert_eq!(pretty(a.term(), true), pretty(b.term(), true));
        // explicit labels survive a round trip
        let again = parse_labeled(&pretty(a.term(), true)).unwrap();
        prop_assert_eq!(again.points(), pts);
    }

    #[test]
    fn zeta_binders_do_not_escape(seed in any::<u64>()) {
        let src = random_term(seed, 12);
        let Some(start) = src.find("zeta(") else { return Ok(()) };
        let e: String = src[start + 5..].chars().take_while(|c| *c != ',').collect();
        let leaked = format!("{src} || {e} <| m()");
        let is_unbound = matches!(
            parse_labeled(&leaked),
            Err(FrontendError::Parse(ParseError::Unbound { ref name, .. })) if *name == e
        );
        prop_assert!(is_unbound, "{}", leaked);
    }
}
