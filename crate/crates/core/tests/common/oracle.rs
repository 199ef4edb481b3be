//! Brute-force affine hulls by plain Gaussian elimination, kept apart
//! from the library's own linear algebra.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type R = BigRational;

pub fn r(n: i64) -> R {
    BigRational::from_integer(BigInt::from(n))
}

/// Reduced row-echelon form with zero rows dropped.
pub fn rref(mut m: Vec<Vec<R>>) -> Vec<Vec<R>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = R::one() / m[row][col].clone();
        for x in m[row].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let pivot_row = m[row].clone();
                for (x, p) in m[i].iter_mut().zip(pivot_row) {
                    *x = x.clone() - p * f.clone();
                }
            }
        }
        row += 1;
    }
    m.truncate(row);
    m
}

/// Basis of `{v : m v = 0}` for an `n`-column matrix.
pub fn nullspace(m: &[Vec<R>], n: usize) -> Vec<Vec<R>> {
    let red = rref(m.to_vec());
    let pivots: Vec<usize> = red.iter().map(|row| row.iter().position(|x| !x.is_zero()).unwrap()).collect();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![R::zero(); n];
        v[free] = R::one();
        for (row, &pc) in red.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Canonical equations `[a | b]` (meaning `a·x = b`) of the affine hull
/// of `points`, all of dimension `dim`.
pub fn hull_equations(points: &[Vec<R>], dim: usize) -> Vec<Vec<R>> {
    // a·p - b = 0 for every p: nullspace of the rows [p | 1]
    let m: Vec<Vec<R>> = points
        .iter()
        .map(|p| {
            let mut row = p.clone();
            row.push(R::one());
            row
        })
        .collect();
    let eqs: Vec<Vec<R>> = nullspace(&m, dim + 1)
        .into_iter()
        .map(|mut v| {
            let c = v.pop().unwrap();
            v.push(-c);
            v
        })
        .collect();
    if eqs.is_empty() {
        return eqs;
    }
    rref(eqs)
}

pub fn satisfies(eq: &[R], p: &[R]) -> bool {
    let dim = p.len();
    let lhs = (0..dim).fold(R::zero(), |acc, i| acc + eq[i].clone() * p[i].clone());
    lhs == eq[dim]
}
