mod common;

use capan_core::generate::random_term;
use capan_core::semantics::{explore, FormalRule, MarkerPolicy, RuleKind, DEFAULT_STATE_CAP};
use capan_core::syntax::Point;
use proptest::prelude::*;

use common::{corpus_source, program};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn environments_match_interfaces(seed in any::<u64>()) {
        let p = program(&random_term(seed, 12));
        for r in explore(&p, 4, DEFAULT_STATE_CAP).unwrap() {
            for t in r.config.threads() {
                let dom: Vec<&String> = t.env.keys().collect();
                let itf: Vec<&String> = p.interface(t.point).iter().collect();
                prop_assert_eq!(dom, itf, "thread at {}", t.point);
            }
        }
    }

    #[test]
    fn behavior_threads_persist_and_step_is_pure(seed in any::<u64>()) {
        let p = program(&random_term(seed, 12));
        for r in explore(&p, 3, DEFAULT_STATE_CAP).unwrap() {
            let c = &r.config;
            for i in p.enabled(c) {
                let a = p.step(c, &i).unwrap();
                let b = p.step(c, &i).unwrap();
                prop_assert_eq!(&a, &b);
                for t in c.threads().iter().filter(|t| p.point(t.point).is_branch()) {
                    let before = c.threads().iter().filter(|u| *u == t).count();
                    let after = a.config.threads().iter().filter(|u| *u == t).count();
                    prop_assert!(after >= before, "behavior thread {} vanished", t.point);
                }
            }
        }
    }

    #[test]
    fn dynamic_firings_from_one_parent_get_distinct_markers(seed in any::<u64>()) {
        let p = program(&random_term(seed, 12));
        let MarkerPolicy::Extend { slot } = FormalRule::dynamic_trans().marker else { unreachable!() };
        for r in explore(&p, 4, DEFAULT_STATE_CAP).unwrap() {
            let c = &r.config;
            let dynamic: Vec<_> = p.enabled(c).into_iter().filter(|i| i.rule == RuleKind::Dynamic).collect();
            for (x, i) in dynamic.iter().enumerate() {
                for j in &dynamic[x + 1..] {
                    let (si, sj) = (p.step(c, i).unwrap(), p.step(c, j).unwrap());
                    if i.threads[slot] != j.threads[slot] || si.label == sj.label {
                        continue;
                    }
                    for a in &si.launched {
                        for b in &sj.launched {
                            prop_assert_ne!(&a.marker, &b.marker);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn pingpong_conserves_one_message() {
    let p = program(&corpus_source("pingpong"));
    let reached = explore(&p, 10, DEFAULT_STATE_CAP).unwrap();
    assert!(reached.len() > 10);
    for r in reached {
        let c = &r.config;
        assert_eq!(c.count(Point(3)) + c.count(Point(7)) + c.count(Point(9)), 1);
    }
}
