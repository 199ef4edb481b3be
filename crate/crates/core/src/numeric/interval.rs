use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// An upper bound: a natural number or `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    Finite(u64),
    Inf,
}

impl Bound {
    pub fn finite(self) -> Option<u64> {
        match self {
            Bound::Finite(n) => Some(n),
            Bound::Inf => None,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(n) => write!(f, "{n}"),
            Bound::Inf => f.write_str("inf"),
        }
    }
}

/// An interval of naturals `[lo; hi]`, or the empty interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Interval {
    Bottom,
    Range { lo: u64, hi: Bound },
}

impl Interval {
    /// `[lo; hi]`, or bottom when `lo > hi`.
    pub fn new(lo: u64, hi: Bound) -> Interval {
        if Bound::Finite(lo) > hi {
            Interval::Bottom
        } else {
            Interval::Range { lo, hi }
        }
    }

    pub fn finite(lo: u64, hi: u64) -> Interval {
        Interval::new(lo, Bound::Finite(hi))
    }

    pub fn constant(c: u64) -> Interval {
        Interval::finite(c, c)
    }

    pub fn top() -> Interval {
        Interval::Range { lo: 0, hi: Bound::Inf }
    }

    pub fn is_bottom(self) -> bool {
        matches!(self, Interval::Bottom)
    }

    pub fn lo(self) -> Option<u64> {
        match self {
            Interval::Range { lo, .. } => Some(lo),
            Interval::Bottom => None,
        }
    }

    pub fn hi(self) -> Option<Bound> {
        match self {
            Interval::Range { hi, .. } => Some(hi),
            Interval::Bottom => None,
        }
    }

    /// The single value of a singleton interval.
    pub fn as_constant(self) -> Option<u64> {
        match self {
            Interval::Range { lo, hi: Bound::Finite(h) } if lo == h => Some(lo),
            _ => None,
        }
    }

    pub fn contains(self, x: u64) -> bool {
        match self {
            Interval::Bottom => false,
            Interval::Range { lo, hi } => lo <= x && Bound::Finite(x) <= hi,
        }
    }

    pub fn leq(self, other: Interval) -> bool {
        match (self, other) {
            (Interval::Bottom, _) => true,
            (_, Interval::Bottom) => false,
            (Interval::Range { lo: a, hi: b }, Interval::Range { lo: c, hi: d }) => c <= a && b <= d,
        }
    }

    pub fn join(self, other: Interval) -> Interval {
        match (self, other) {
            (Interval::Bottom, x) | (x, Interval::Bottom) => x,
            (Interval::Range { lo: a, hi: b }, Interval::Range { lo: c, hi: d }) => {
                Interval::Range { lo: a.min(c), hi: b.max(d) }
            }
        }
    }

    pub fn meet(self, other: Interval) -> Interval {
        match (self, other) {
            (Interval::Bottom, _) | (_, Interval::Bottom) => Interval::Bottom,
            (Interval::Range { lo: a, hi: b }, Interval::Range { lo: c, hi: d }) => Interval::new(a.max(c), b.min(d)),
        }
    }

    /// Keeps `self`'s bounds where `next` does not exceed them; an
    /// unstable lower bound drops to 0, an unstable upper bound to `+∞`.
    pub fn widen(self, next: Interval) -> Interval {
        match (self, next) {
            (Interval::Bottom, x) => x,
            (x, Interval::Bottom) => x,
            (Interval::Range { lo: a, hi: b }, Interval::Range { lo: c, hi: d }) => {
                Interval::Range { lo: if c < a { 0 } else { a }, hi: if d > b { Bound::Inf } else { b } }
            }
        }
    }

    /// Translation by `delta`. Values pushed below zero are dropped.
    pub fn shift(self, delta: i64) -> Interval {
        match self {
            Interval::Bottom => Interval::Bottom,
            Interval::Range { lo, hi } => {
                let mv = |x: u64| -> Option<u64> {
                    let y = x as i128 + delta as i128;
                    (y >= 0).then_some(y as u64)
                };
                let hi = match hi {
                    Bound::Inf => Bound::Inf,
                    Bound::Finite(h) => match mv(h) {
                        Some(h) => Bound::Finite(h),
                        None => return Interval::Bottom,
                    },
                };
                Interval::new(mv(lo).unwrap_or(0), hi)
            }
        }
    }
}

impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.leq(*other), other.leq(*self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Bottom => f.write_str("bot"),
            Interval::Range { lo, hi } => write!(f, "[{lo};{hi}]"),
        }
    }
}

impl FromStr for Bound {
    type Err = String;

    fn from_str(s: &str) -> Result<Bound, String> {
        if s == "inf" {
            return Ok(Bound::Inf);
        }
        s.parse().map(Bound::Finite).map_err(|_| format!("bad bound `{s}`"))
    }
}

impl FromStr for Interval {
    type Err = String;

    /// Parse the `Display` form back.
    fn from_str(s: &str) -> Result<Interval, String> {
        if s == "bot" {
            return Ok(Interval::Bottom);
        }
        let inner =
            s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(|| format!("bad interval `{s}`"))?;
        let (lo, hi) = inner.split_once(';').ok_or_else(|| format!("bad interval `{s}`"))?;
        let lo = lo.parse::<u64>().map_err(|_| format!("bad interval `{s}`"))?;
        Ok(Interval::new(lo, hi.parse()?))
    }
}
