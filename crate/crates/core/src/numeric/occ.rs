//! Occurrence counting: intervals and affine equalities over the counting
//! variables, as a reduced product.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::affine::{q, AffineSpace, Q};
use super::interval::{Bound, Interval};
use super::lp::{maximize, LpResult};
use crate::syntax::Point;

/// A counting variable: a transition counter `comm(branch, message)` or
/// the number of threads at a program point. Counters sort first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CountVar {
    Comm { branch: Point, message: Point },
    Point { point: Point },
}

impl fmt::Display for CountVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountVar::Comm { branch, message } => write!(f, "comm({branch},{message})"),
            CountVar::Point { point } => write!(f, "p{point}"),
        }
    }
}

/// Cap on bound-propagation rounds inside [`OccCount::reduce`].
const REDUCE_ROUNDS: usize = 100;

/// Interval box and affine space over the same indexed variables. Bottom
/// when either side is.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OccCount {
    itv: Vec<Interval>,
    aff: AffineSpace,
}

impl OccCount {
    pub fn top(dim: usize) -> OccCount {
        OccCount { itv: vec![Interval::top(); dim], aff: AffineSpace::top(dim) }
    }

    pub fn bottom(dim: usize) -> OccCount {
        OccCount { itv: vec![Interval::Bottom; dim], aff: AffineSpace::bottom(dim) }
    }

    /// The exact count vector `x`.
    pub fn exact(x: &[u64]) -> OccCount {
        let pt: Vec<Q> = x.iter().map(|&v| Q::from_integer(BigInt::from(v))).collect();
        OccCount { itv: x.iter().map(|&v| Interval::constant(v)).collect(), aff: AffineSpace::point(&pt) }
    }

    /// Build from parts, then reduce.
    pub fn from_parts(itv: Vec<Interval>, aff: AffineSpace) -> OccCount {
        assert_eq!(itv.len(), aff.dim());
        OccCount { itv, aff }.reduce()
    }

    pub fn dim(&self) -> usize {
        self.itv.len()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.itv
    }

    pub fn interval(&self, i: usize) -> Interval {
        self.itv[i]
    }

    pub fn aff(&self) -> &AffineSpace {
        &self.aff
    }

    pub fn is_bottom(&self) -> bool {
        self.aff.is_bottom() || self.itv.iter().any(|i| i.is_bottom())
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        if self.is_bottom() {
            return false;
        }
        let pt: Vec<Q> = x.iter().map(|&v| Q::from_integer(BigInt::from(v))).collect();
        self.itv.iter().zip(x).all(|(i, &v)| i.contains(v)) && self.aff.contains(&pt)
    }

    pub fn leq(&self, other: &OccCount) -> bool {
        if self.is_bottom() {
            return true;
        }
        if other.is_bottom() {
            return false;
        }
        self.itv.iter().zip(&other.itv).all(|(a, b)| a.leq(*b)) && self.aff.leq(&other.aff)
    }

    /// Componentwise join followed by one reduction.
    pub fn join_all<'a>(dim: usize, xs: impl IntoIterator<Item = &'a OccCount>) -> OccCount {
        let live: Vec<&OccCount> = xs.into_iter().filter(|x| !x.is_bottom()).collect();
        if live.is_empty() {
            return OccCount::bottom(dim);
        }
        let itv = (0..dim).map(|i| live.iter().fold(Interval::Bottom, |acc, x| acc.join(x.itv[i]))).collect();
        let aff = AffineSpace::join_all(dim, live.iter().map(|x| &x.aff));
        OccCount { itv, aff }.reduce()
    }

    pub fn join(&self, other: &OccCount) -> OccCount {
        OccCount::join_all(self.dim(), [self, other])
    }

    /// Interval widening; the affine part uses its join, which already
    /// has finite ascending chains. The result is not reduced: tightening
    /// a widened bound from the equations would undo the extrapolation.
    pub fn widen(&self, next: &OccCount) -> OccCount {
        if self.is_bottom() {
            return next.clone();
        }
        if next.is_bottom() {
            return self.clone();
        }
        let itv = self.itv.iter().zip(&next.itv).map(|(a, b)| a.widen(*b)).collect();
        OccCount { itv, aff: self.aff.join(&next.aff) }
    }

    /// Tighten each side with the other until stable.
    pub fn reduce(mut self) -> OccCount {
        let dim = self.dim();
        if self.is_bottom() {
            return OccCount::bottom(dim);
        }
        let mut injected = vec![false; dim];
        for _ in 0..REDUCE_ROUNDS {
            for i in 0..dim {
                if let (false, Some(c)) = (injected[i], self.itv[i].as_constant()) {
                    injected[i] = true;
                    let mut e = vec![Q::zero(); dim];
                    e[i] = Q::one();
                    self.aff = self.aff.meet_eq(&e, &q(c as i64));
                }
            }
            if self.aff.is_bottom() {
                return OccCount::bottom(dim);
            }
            let mut changed = false;
            let rows = self.aff.rows().unwrap_or(&[]).to_vec();
            for r in &rows {
                for j in (0..dim).filter(|&j| !r[j].is_zero()) {
                    let Some(new) = self.implied(r, j) else { continue };
                    let met = self.itv[j].meet(new);
                    if met.is_bottom() {
                        return OccCount::bottom(dim);
                    }
                    if met != self.itv[j] {
                        self.itv[j] = met;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        self
    }

    /// Bounds on `x_j` implied by row `r` and the other variables' boxes.
    fn implied(&self, r: &[Q], j: usize) -> Option<Interval> {
        let dim = self.dim();
        // c_j x_j = d - Σ_{k≠j} c_k x_k
        let mut lo = Some(r[dim].clone());
        let mut hi = Some(r[dim].clone());
        for k in (0..dim).filter(|&k| k != j && !r[k].is_zero()) {
            let (klo, khi) = match self.itv[k] {
                Interval::Bottom => return None,
                Interval::Range { lo, hi } => (q(lo as i64), hi.finite().map(|h| q(h as i64))),
            };
            let c = &r[k];
            if c.is_positive() {
                // subtracting c·x_k: lower uses khi, upper uses klo
                lo = match (lo, &khi) {
                    (Some(l), Some(h)) => Some(l - c * h),
                    _ => None,
                };
                hi = hi.map(|h| h - c * &klo);
            } else {
                lo = lo.map(|l| l - c * &klo);
                hi = match (hi, &khi) {
                    (Some(u), Some(h)) => Some(u - c * h),
                    _ => None,
                };
            }
        }
        let cj = &r[j];
        let (lo, hi) = if cj.is_positive() {
            (lo.map(|l| l / cj), hi.map(|h| h / cj))
        } else {
            (hi.map(|h| h / cj), lo.map(|l| l / cj))
        };
        let lo = lo.map_or(0, |l| {
            let c = l.ceil().to_integer();
            if c.is_negative() {
                0
            } else {
                c.to_u64().unwrap_or(u64::MAX)
            }
        });
        let hi = match hi {
            None => Bound::Inf,
            Some(h) => {
                let f = h.floor().to_integer();
                if f.is_negative() {
                    return Some(Interval::Bottom);
                }
                f.to_u64().map_or(Bound::Inf, Bound::Finite)
            }
        };
        Some(Interval::new(lo, hi))
    }

    /// Refine with `x_v ≥ t_v`.
    pub fn sync(&self, t: &[(usize, u64)]) -> OccCount {
        if self.is_bottom() {
            return self.clone();
        }
        let mut out = self.clone();
        for &(i, k) in t {
            out.itv[i] = out.itv[i].meet(Interval::new(k, Bound::Inf));
        }
        out.reduce()
    }

    /// Translation by `delta` on both components.
    pub fn step(&self, delta: &[(usize, i64)]) -> OccCount {
        if self.is_bottom() {
            return self.clone();
        }
        let dim = self.dim();
        let mut d = vec![Q::zero(); dim];
        let mut itv = self.itv.clone();
        for &(i, k) in delta {
            d[i] += q(k);
            itv[i] = itv[i].shift(k);
        }
        OccCount { itv, aff: self.aff.translate(&d) }.reduce()
    }

    /// Force an interval, as when corrupting a result for negative tests.
    pub fn with_interval(&self, i: usize, itv: Interval) -> OccCount {
        let mut out = self.clone();
        out.itv[i] = itv;
        out
    }

    /// Maximum of `Σ_{i∈S} x_i` over the rational relaxation; `Inf` when
    /// unbounded, `Finite(0)` on an empty relaxation.
    pub fn max_sum(&self, s: &[usize]) -> Bound {
        if s.is_empty() || self.is_bottom() {
            return Bound::Finite(0);
        }
        let dim = self.dim();
        // x_i = lo_i + y_i, y_i ≥ 0; slack z_i for every finite upper bound.
        let lows: Vec<Q> = self.itv.iter().map(|i| q(i.lo().unwrap() as i64)).collect();
        let finite: Vec<usize> = (0..dim).filter(|&i| self.itv[i].hi() != Some(Bound::Inf)).collect();
        let ncols = dim + finite.len();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for r in self.aff.rows().unwrap_or(&[]) {
            let mut row = r[..dim].to_vec();
            row.resize(ncols, Q::zero());
            let shift = r[..dim].iter().zip(&lows).fold(Q::zero(), |acc, (c, l)| acc + c * l);
            a.push(row);
            b.push(&r[dim] - shift);
        }
        for (k, &i) in finite.iter().enumerate() {
            let mut row = vec![Q::zero(); ncols];
            row[i] = Q::one();
            row[dim + k] = Q::one();
            a.push(row);
            let hi = self.itv[i].hi().unwrap().finite().unwrap();
            b.push(q(hi as i64) - &lows[i]);
        }
        let mut c = vec![Q::zero(); ncols];
        for &i in s {
            c[i] = Q::one();
        }
        let base: Q = s.iter().fold(Q::zero(), |acc, &i| acc + &lows[i]);
        match maximize(&c, &a, &b) {
            LpResult::Optimal { value: v, .. } => {
                let total = (v + base).floor().to_integer();
                Bound::Finite(total.to_u64().unwrap_or(u64::MAX))
            }
            LpResult::Unbounded => Bound::Inf,
            LpResult::Infeasible => Bound::Finite(0),
        }
    }

    /// Look for an entailed equation `Σ_{i∈S} x_i + Σ_{j∉S} k_j·x_j = 1`
    /// with every `k_j ≥ 0`. Returns integer coefficients over all
    /// variables and the constant.
    pub fn exclusion_certificate(&self, s: &[usize]) -> Option<(Vec<BigInt>, BigInt)> {
        if s.is_empty() || self.is_bottom() {
            return None;
        }
        let dim = self.dim();
        let mut target = vec![Q::zero(); dim];
        for &i in s {
            target[i] = Q::one();
        }
        if self.aff.entails(&target, &Q::one()) {
            return Some((target.iter().map(|x| x.to_integer()).collect(), BigInt::one()));
        }
        // Unknowns: λ⁺, λ⁻ per row, k_j per j ∉ S. Constraints: for i∈S
        // (λR)_i = 1; for j∉S (λR)_j - k_j = 0; (λR)_const = 1.
        let rows = self.aff.rows()?.to_vec();
        let m = rows.len();
        let others: Vec<usize> = (0..dim).filter(|i| !s.contains(i)).collect();
        let ncols = 2 * m + others.len();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for col in 0..=dim {
            let mut row = vec![Q::zero(); ncols];
            for (ri, r) in rows.iter().enumerate() {
                row[ri] = r[col].clone();
                row[m + ri] = -r[col].clone();
            }
            if col < dim {
                if let Some(k) = others.iter().position(|&j| j == col) {
                    row[2 * m + k] = -Q::one();
                    b.push(Q::zero());
                } else {
                    b.push(Q::one());
                }
            } else {
                b.push(Q::one());
            }
            a.push(row);
        }
        // Prefer certificates with small extra weight.
        let mut c = vec![Q::zero(); ncols];
        for x in &mut c[2 * m..] {
            *x = -Q::one();
        }
        let LpResult::Optimal { x, .. } = maximize(&c, &a, &b) else { return None };
        let mut coeffs = vec![Q::zero(); dim + 1];
        for (ri, r) in rows.iter().enumerate() {
            let lambda = &x[ri] - &x[m + ri];
            for (acc, v) in coeffs.iter_mut().zip(r) {
                *acc += &lambda * v;
            }
        }
        let lcm = coeffs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let l = Q::from_integer(lcm);
        let ints: Vec<BigInt> = coeffs.iter().map(|x| (x * &l).to_integer()).collect();
        Some((ints[..dim].to_vec(), ints[dim].clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_is_injected() {
        let c = OccCount::from_parts(vec![Interval::constant(2)], AffineSpace::top(1));
        assert!(c.aff().entails(&[q(1)], &q(2)));
    }

    #[test]
    fn substitution_tightens() {
        let aff = AffineSpace::from_rows(2, vec![vec![q(1), q(1), q(1)]]);
        let c = OccCount::from_parts(vec![Interval::constant(0), Interval::top()], aff);
        assert_eq!(c.interval(1), Interval::constant(1));
    }

    #[test]
    fn tight_boxes_unchanged() {
        let aff = AffineSpace::from_rows(3, vec![vec![q(1), q(1), q(1), q(1)]]);
        let itv = vec![Interval::finite(0, 1); 3];
        let c = OccCount::from_parts(itv.clone(), aff);
        assert_eq!(c.intervals(), &itv[..]);
        assert_eq!(c.clone().reduce(), c);
    }

    #[test]
    fn sync_clamps_and_detects_absence() {
        let c = OccCount::from_parts(vec![Interval::constant(0)], AffineSpace::top(1));
        assert!(c.sync(&[(0, 1)]).is_bottom());
        let c = OccCount::from_parts(vec![Interval::finite(0, 1)], AffineSpace::top(1));
        assert_eq!(c.sync(&[(0, 1)]).interval(0), Interval::constant(1));
    }

    #[test]
    fn max_sum_cases() {
        let aff = AffineSpace::from_rows(3, vec![vec![q(1), q(1), q(1), q(1)]]);
        let c = OccCount::from_parts(vec![Interval::finite(0, 1); 3], aff);
        assert_eq!(c.max_sum(&[0, 1, 2]), Bound::Finite(1));
        assert_eq!(c.max_sum(&[]), Bound::Finite(0));
        let c = OccCount::top(1);
        assert_eq!(c.max_sum(&[0]), Bound::Inf);
    }
}
