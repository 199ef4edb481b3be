mod common;

use capan_core::numeric::{q, AffineSpace, Bound, Interval, OccCount, Q};
use num_traits::{One, Zero};
use proptest::collection::vec;
use proptest::prelude::*;

use common::oracle::{hull_equations, r, satisfies};

fn qs(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

/// Affine hull of a few random points in dimension `dim`.
fn points(dim: usize, max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    vec(vec(-4i64..5, dim), 1..=max)
}

fn hull(pts: &[Vec<i64>], dim: usize) -> AffineSpace {
    let spaces: Vec<AffineSpace> = pts.iter().map(|p| AffineSpace::point(&qs(p))).collect();
    AffineSpace::join_all(dim, spaces.iter())
}

/// An occurrence value generated by joining natural vectors.
fn occ(dim: usize) -> impl Strategy<Value = (OccCount, Vec<Vec<u64>>)> {
    vec(vec(0u64..4, dim), 1..4).prop_map(move |pts| {
        let xs: Vec<OccCount> = pts.iter().map(|p| OccCount::exact(p)).collect();
        (OccCount::join_all(dim, xs.iter()), pts)
    })
}

fn is_rref(rows: &[Vec<Q>], dim: usize) -> bool {
    let mut last = None;
    for (i, row) in rows.iter().enumerate() {
        let Some(p) = row[..dim].iter().position(|x| !x.is_zero()) else { return false };
        if last.is_some_and(|l| p <= l) || !row[p].is_one() {
            return false;
        }
        if rows.iter().enumerate().any(|(j, other)| j != i && !other[p].is_zero()) {
            return false;
        }
        last = Some(p);
    }
    true
}

/// Every natural vector in the box `[0, side)^dim`.
fn grid(dim: usize, side: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out.into_iter().flat_map(|v| (0..side).map(move |k| [v.clone(), vec![k]].concat())).collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn outputs_are_canonical(a in points(6, 4), b in points(6, 4), d in vec(-3i64..4, 6)) {
        let j = hull(&a, 6).join(&hull(&b, 6));
        prop_assert!(is_rref(j.rows().unwrap(), 6));
        let t = j.translate(&qs(&d));
        prop_assert!(is_rref(t.rows().unwrap(), 6));
    }

    #[test]
    fn join_laws_dim6(a in points(6, 3), b in points(6, 3), c in points(6, 3)) {
        let (a, b, c) = (hull(&a, 6), hull(&b, 6), hull(&c, 6));
        prop_assert_eq!(a.join(&b), b.join(&a));
        prop_assert_eq!(a.join(&a), a.clone());
        prop_assert_eq!(a.join(&b).join(&c), a.join(&b.join(&c)));
    }

    #[test]
    fn hull_matches_oracle(pts in points(4, 5)) {
        let rows = hull(&pts, 4).rows().unwrap().to_vec();
        let ps: Vec<Vec<Q>> = pts.iter().map(|p| p.iter().map(|&x| r(x)).collect()).collect();
        prop_assert_eq!(rows, hull_equations(&ps, 4));
    }

    #[test]
    fn step_is_sound((c, pts) in occ(3), delta in vec(-1i64..2, 3)) {
        let d: Vec<(usize, i64)> = delta.iter().copied().enumerate().collect();
        let after = c.step(&d);
        for x in grid(3, 5).into_iter().chain(pts) {
            if !c.contains(&x) {
                continue;
            }
            let y: Vec<i64> = x.iter().zip(&delta).map(|(&a, &k)| a as i64 + k).collect();
            if y.iter().all(|&v| v >= 0) {
                let y: Vec<u64> = y.iter().map(|&v| v as u64).collect();
                prop_assert!(after.contains(&y), "{:?} -> {:?}", x, y);
            }
        }
    }

    #[test]
    fn widening_chains_stabilize(start in vec(0u64..3, 4), pts in vec(vec(0u64..6, 4), 1..40)) {
        let dim = 4;
        let mut c = OccCount::exact(&start);
        let mut changes = 0;
        for p in &pts {
            let next = c.widen(&c.join(&OccCount::exact(p)));
            prop_assert!(c.leq(&next));
            if next != c {
                changes += 1;
            }
            c = next;
        }
        prop_assert!(changes <= 3 * dim, "{} changes", changes);
    }

    #[test]
    fn max_sum_bounds_enumerated_points((c, pts) in occ(3), mask in vec(any::<bool>(), 3)) {
        let s: Vec<usize> = (0..3).filter(|&i| mask[i]).collect();
        let bound = c.max_sum(&s);
        for x in grid(3, 5).into_iter().chain(pts) {
            if c.contains(&x) {
                let sum: u64 = s.iter().map(|&i| x[i]).sum();
                prop_assert!(Bound::Finite(sum) <= bound);
            }
        }
    }
}

#[test]
fn max_sum_is_tight_on_exclusive_pair() {
    // x0 + x1 = 1 with both in [0;1]
    let c = OccCount::exact(&[1, 0]).join(&OccCount::exact(&[0, 1]));
    assert_eq!(c.interval(0), Interval::finite(0, 1));
    assert_eq!(c.max_sum(&[0, 1]), Bound::Finite(1));
    assert!(c.aff().entails(&[q(1), q(1)], &q(1)));
    let eq = [r(1), r(1), r(1)];
    assert!(satisfies(&eq, &[r(1), r(0)]));
}
