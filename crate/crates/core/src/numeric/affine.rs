//! Karr's domain of affine equalities over exact rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// An affine subspace of `Q^dim` given by equations `Σ c_i·x_i = d`,
/// kept in reduced row-echelon form. Each row stores `dim` coefficients
/// followed by the constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineSpace {
    dim: usize,
    rows: Option<Vec<Vec<Q>>>,
}

impl AffineSpace {
    pub fn top(dim: usize) -> AffineSpace {
        AffineSpace { dim, rows: Some(Vec::new()) }
    }

    pub fn bottom(dim: usize) -> AffineSpace {
        AffineSpace { dim, rows: None }
    }

    /// The single point `p`.
    pub fn point(p: &[Q]) -> AffineSpace {
        let dim = p.len();
        let rows = (0..dim)
            .map(|i| {
                let mut r = vec![Q::zero(); dim + 1];
                r[i] = Q::one();
                r[dim] = p[i].clone();
                r
            })
            .collect();
        AffineSpace { dim, rows: Some(rows) }
    }

    /// The solution set of `rows` (each of length `dim + 1`).
    pub fn from_rows(dim: usize, rows: Vec<Vec<Q>>) -> AffineSpace {
        AffineSpace { dim, rows: rref(dim, rows) }
    }

    /// The affine hull of `base + span(dirs)`.
    pub fn from_generators(base: &[Q], dirs: &[Vec<Q>]) -> AffineSpace {
        let dim = base.len();
        let normals = nullspace(dim, dirs.to_vec());
        let rows = normals
            .into_iter()
            .map(|mut a| {
                let d = dot(&a, base);
                a.push(d);
                a
            })
            .collect();
        AffineSpace::from_rows(dim, rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_bottom(&self) -> bool {
        self.rows.is_none()
    }

    pub fn is_top(&self) -> bool {
        self.rows.as_ref().is_some_and(|r| r.is_empty())
    }

    /// Rows in reduced row-echelon form; `None` for bottom.
    pub fn rows(&self) -> Option<&[Vec<Q>]> {
        self.rows.as_deref()
    }

    /// A point of the space and a basis of its direction space.
    pub fn generators(&self) -> Option<(Vec<Q>, Vec<Vec<Q>>)> {
        let rows = self.rows.as_ref()?;
        let dim = self.dim;
        let pivots: Vec<usize> = rows.iter().map(|r| pivot(r, dim).expect("rref rows are nonzero")).collect();
        let mut base = vec![Q::zero(); dim];
        for (r, &p) in rows.iter().zip(&pivots) {
            base[p] = r[dim].clone();
        }
        let mut dirs = Vec::new();
        for f in (0..dim).filter(|c| !pivots.contains(c)) {
            let mut d = vec![Q::zero(); dim];
            d[f] = Q::one();
            for (r, &p) in rows.iter().zip(&pivots) {
                d[p] = -r[f].clone();
            }
            dirs.push(d);
        }
        Some((base, dirs))
    }

    /// Affine hull of the union.
    pub fn join(&self, other: &AffineSpace) -> AffineSpace {
        AffineSpace::join_all(self.dim, [self, other])
    }

    /// Affine hull of the union of all operands, computed in one pass.
    pub fn join_all<'a>(dim: usize, spaces: impl IntoIterator<Item = &'a AffineSpace>) -> AffineSpace {
        let mut base: Option<Vec<Q>> = None;
        let mut dirs: Vec<Vec<Q>> = Vec::new();
        let mut count = 0;
        let mut only: Option<&AffineSpace> = None;
        for s in spaces {
            let Some((p, ds)) = s.generators() else { continue };
            count += 1;
            only = Some(s);
            dirs.extend(ds);
            match &base {
                None => base = Some(p),
                Some(b) => dirs.push(p.iter().zip(b).map(|(x, y)| x - y).collect()),
            }
        }
        match (count, base) {
            (0, _) | (_, None) => AffineSpace::bottom(dim),
            (1, _) => only.unwrap().clone(),
            (_, Some(b)) => AffineSpace::from_generators(&b, &dirs),
        }
    }

    /// Intersection with one more equation.
    pub fn meet_eq(&self, coeffs: &[Q], constant: &Q) -> AffineSpace {
        let Some(rows) = &self.rows else { return self.clone() };
        let dim = self.dim;
        // the residual is already zero on every existing pivot column
        let v = self.residual(coeffs, constant);
        let Some(p) = pivot(&v, dim) else {
            return if v[dim].is_zero() { self.clone() } else { AffineSpace::bottom(dim) };
        };
        let inv = v[p].recip();
        let v: Vec<Q> = v.iter().map(|x| x * &inv).collect();
        let mut out: Vec<Vec<Q>> = rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                if !r[p].is_zero() {
                    let f = r[p].clone();
                    for (x, y) in r.iter_mut().zip(&v) {
                        *x -= &f * y;
                    }
                }
                r
            })
            .collect();
        let at = out.iter().position(|r| pivot(r, dim).is_some_and(|q| q > p)).unwrap_or(out.len());
        out.insert(at, v);
        AffineSpace { dim, rows: Some(out) }
    }

    pub fn meet(&self, other: &AffineSpace) -> AffineSpace {
        match (&self.rows, &other.rows) {
            (Some(a), Some(b)) => AffineSpace::from_rows(self.dim, a.iter().chain(b).cloned().collect()),
            _ => AffineSpace::bottom(self.dim),
        }
    }

    /// Image under `x ← x + delta`.
    pub fn translate(&self, delta: &[Q]) -> AffineSpace {
        let Some(rows) = &self.rows else { return self.clone() };
        let dim = self.dim;
        let rows = rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r[dim] = &r[dim] + dot(&r[..dim], delta);
                r
            })
            .collect();
        AffineSpace { dim, rows: Some(rows) }
    }

    /// Reduce `[coeffs | constant]` against the rows.
    fn residual(&self, coeffs: &[Q], constant: &Q) -> Vec<Q> {
        let dim = self.dim;
        let mut v = coeffs.to_vec();
        v.push(constant.clone());
        for r in self.rows.as_deref().unwrap_or(&[]) {
            let p = pivot(r, dim).unwrap();
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (vi, ri) in v.iter_mut().zip(r) {
                    *vi -= &f * ri;
                }
            }
        }
        v
    }

    /// Whether `Σ coeffs·x = constant` holds on every point.
    pub fn entails(&self, coeffs: &[Q], constant: &Q) -> bool {
        if self.is_bottom() {
            return true;
        }
        self.residual(coeffs, constant).iter().all(Zero::is_zero)
    }

    /// When `Σ coeffs·x` is constant on the space, that constant.
    pub fn entailed_constant(&self, coeffs: &[Q]) -> Option<Q> {
        if self.is_bottom() {
            return None;
        }
        let v = self.residual(coeffs, &Q::zero());
        v[..self.dim].iter().all(Zero::is_zero).then(|| -v[self.dim].clone())
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        match &self.rows {
            None => false,
            Some(rows) => rows.iter().all(|r| dot(&r[..self.dim], x) == r[self.dim]),
        }
    }

    /// Inclusion: every equation of `other` holds on `self`.
    pub fn leq(&self, other: &AffineSpace) -> bool {
        match (&self.rows, &other.rows) {
            (None, _) => true,
            (_, None) => false,
            (Some(_), Some(b)) => b.iter().all(|r| self.entails(&r[..self.dim], &r[self.dim])),
        }
    }

    /// Rows scaled to coprime integers with a positive leading coefficient.
    pub fn integer_rows(&self) -> Vec<(Vec<BigInt>, BigInt)> {
        let Some(rows) = &self.rows else { return Vec::new() };
        rows.iter().map(|r| integerize(r, self.dim)).collect()
    }

    /// Human-readable equations such as `3*p1 - 1*p4 = 2`, sorted.
    pub fn equations(&self, names: &[String]) -> Vec<String> {
        if self.is_bottom() {
            return vec!["0 = 1".to_string()];
        }
        let mut out: Vec<String> = self.integer_rows().iter().map(|(c, d)| format_equation(c, d, names)).collect();
        out.sort();
        out
    }
}

pub fn format_equation(coeffs: &[BigInt], constant: &BigInt, names: &[String]) -> String {
    let mut s = String::new();
    for (c, name) in coeffs.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else if c.is_negative() {
            s.push_str(" - ");
        } else {
            s.push_str(" + ");
        }
        s.push_str(&format!("{}*{}", c.abs(), name));
    }
    if s.is_empty() {
        s.push('0');
    }
    format!("{s} = {constant}")
}

/// Inverse of [`format_equation`]. Returns `None` on malformed input or
/// an unknown variable name.
pub fn parse_equation(s: &str, names: &[String]) -> Option<(Vec<Q>, Q)> {
    let (lhs, rhs) = s.split_once(" = ")?;
    let constant = Q::from_integer(rhs.trim().parse::<BigInt>().ok()?);
    let mut coeffs = vec![Q::zero(); names.len()];
    if lhs.trim() == "0" {
        return Some((coeffs, constant));
    }
    let mut rest = lhs.trim();
    let mut sign = BigInt::one();
    if let Some(r) = rest.strip_prefix('-') {
        sign = -sign;
        rest = r;
    }
    loop {
        let (term, tail) = match (rest.find(" + "), rest.find(" - ")) {
            (Some(a), Some(b)) => (&rest[..a.min(b)], Some(&rest[a.min(b)..])),
            (Some(a), None) | (None, Some(a)) => (&rest[..a], Some(&rest[a..])),
            (None, None) => (rest, None),
        };
        let (c, name) = term.split_once('*')?;
        let k = names.iter().position(|n| n == name)?;
        coeffs[k] += Q::from_integer(c.parse::<BigInt>().ok()? * &sign);
        match tail {
            None => break,
            Some(t) => {
                sign = if t.starts_with(" - ") { -BigInt::one() } else { BigInt::one() };
                rest = &t[3..];
            }
        }
    }
    Some((coeffs, constant))
}

fn integerize(r: &[Q], dim: usize) -> (Vec<BigInt>, BigInt) {
    let lcm = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = r.iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let g = if g.is_zero() { BigInt::one() } else { g };
    let lead_neg = ints[..dim].iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let sign = if lead_neg { -BigInt::one() } else { BigInt::one() };
    let ints: Vec<BigInt> = ints.into_iter().map(|x| x / &g * &sign).collect();
    (ints[..dim].to_vec(), ints[dim].clone())
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

fn pivot(r: &[Q], dim: usize) -> Option<usize> {
    r[..dim].iter().position(|x| !x.is_zero())
}

/// Gauss-Jordan elimination on `[A | d]`; `None` when inconsistent.
fn rref(dim: usize, mut rows: Vec<Vec<Q>>) -> Option<Vec<Vec<Q>>> {
    let mut out: Vec<Vec<Q>> = Vec::new();
    let mut r = 0;
    for col in 0..dim {
        let Some(k) = (r..rows.len()).find(|&k| !rows[k][col].is_zero()) else { continue };
        rows.swap(r, k);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let prow = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
    }
    for (k, row) in rows.into_iter().enumerate() {
        if k < r {
            out.push(row);
        } else if !row[dim].is_zero() {
            return None;
        }
    }
    Some(out)
}

/// A basis of `{a | a·d = 0 for all d in dirs}`.
fn nullspace(dim: usize, dirs: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    let rows: Vec<Vec<Q>> = dirs
        .into_iter()
        .map(|mut d| {
            d.push(Q::zero());
            d
        })
        .collect();
    let rows = rref(dim, rows).expect("homogeneous system is consistent");
    let pivots: Vec<usize> = rows.iter().map(|r| pivot(r, dim).unwrap()).collect();
    (0..dim)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut a = vec![Q::zero(); dim];
            a[f] = Q::one();
            for (r, &p) in rows.iter().zip(&pivots) {
                a[p] = -r[f].clone();
            }
            a
        })
        .collect()
}
