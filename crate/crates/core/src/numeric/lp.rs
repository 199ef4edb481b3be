//! Exact two-phase simplex with Bland's rule.

use num_traits::{One, Signed, Zero};

use super::affine::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Optimal { value: Q, x: Vec<Q> },
    Unbounded,
    Infeasible,
}

/// Maximize `c·x` subject to `A x = b`, `x ≥ 0`.
pub fn maximize(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> LpResult {
    let n = c.len();
    let m = a.len();
    // Tableau columns: n originals, m artificials, rhs.
    let width = n + m + 1;
    let mut tab: Vec<Vec<Q>> = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let neg = rhs.is_negative();
        let mut r: Vec<Q> = row.iter().map(|x| if neg { -x.clone() } else { x.clone() }).collect();
        r.resize(width, Q::zero());
        r[n + i] = Q::one();
        r[width - 1] = if neg { -rhs.clone() } else { rhs.clone() };
        tab.push(r);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let mut phase1 = vec![Q::zero(); n + m];
    for x in &mut phase1[n..] {
        *x = -Q::one();
    }
    if run(&mut tab, &mut basis, &phase1, n + m).is_err() {
        unreachable!("phase one is bounded");
    }
    if objective(&tab, &basis, &phase1).is_negative() {
        return LpResult::Infeasible;
    }

    // Drive artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.len() {
        if basis[i] >= n {
            match (0..n).find(|&j| !tab[i][j].is_zero()) {
                Some(j) => pivot(&mut tab, &mut basis, i, j),
                None => {
                    tab.remove(i);
                    basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut phase2 = c.to_vec();
    phase2.resize(n + m, Q::zero());
    match run(&mut tab, &mut basis, &phase2, n) {
        Ok(()) => {
            let mut x = vec![Q::zero(); n];
            for (r, &j) in tab.iter().zip(&basis) {
                if j < n {
                    x[j] = r[n + m].clone();
                }
            }
            LpResult::Optimal { value: objective(&tab, &basis, &phase2), x }
        }
        Err(()) => LpResult::Unbounded,
    }
}

fn objective(tab: &[Vec<Q>], basis: &[usize], c: &[Q]) -> Q {
    let rhs = tab.first().map_or(0, |r| r.len() - 1);
    tab.iter().zip(basis).fold(Q::zero(), |acc, (r, &j)| acc + &c[j] * &r[rhs])
}

/// Primal simplex over columns `0..allowed`. `Err` when unbounded.
fn run(tab: &mut [Vec<Q>], basis: &mut [usize], c: &[Q], allowed: usize) -> Result<(), ()> {
    loop {
        let entering = (0..allowed).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let reduced = tab.iter().zip(basis.iter()).fold(c[j].clone(), |acc, (r, &b)| acc - &c[b] * &r[j]);
            reduced.is_positive()
        });
        let Some(j) = entering else { return Ok(()) };
        let rhs = tab.first().map_or(0, |r| r.len() - 1);
        let mut best: Option<(usize, Q)> = None;
        for (i, r) in tab.iter().enumerate() {
            if r[j].is_positive() {
                let ratio = &r[rhs] / &r[j];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        let Some((i, _)) = best else { return Err(()) };
        pivot(tab, basis, i, j);
    }
}

fn pivot(tab: &mut [Vec<Q>], basis: &mut [usize], i: usize, j: usize) {
    let inv = tab[i][j].recip();
    for x in tab[i].iter_mut() {
        *x *= &inv;
    }
    let prow = tab[i].clone();
    for (k, r) in tab.iter_mut().enumerate() {
        if k != i && !r[j].is_zero() {
            let f = r[j].clone();
            for (x, p) in r.iter_mut().zip(&prow) {
                *x -= &f * p;
            }
        }
    }
    basis[i] = j;
}
