//! Exact piecewise-linear functions of the line.
//!
//! Two flavours are stored by one period of breakpoints on `[0, 1)`:
//!
//! * [`PLMap`]: an increasing bijection with `φ(x + 1) = φ(x) + 1`.
//! * [`PLCocycle`]: a period-1 function with `ψ(x + 1) = ψ(x)`.
//!
//! Composition is written postfix throughout: `compose(f, g)` is the map
//! `x ↦ g(f(x))`, i.e. "apply `f` first". All arithmetic is exact.

use std::fmt;

use num::{BigInt, BigRational, One, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// `n / d` as a [`Rational`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlError {
    #[error("no breakpoints given")]
    Empty,
    #[error("breakpoints at x = {0} (mod 1) disagree")]
    InconsistentDuplicate(String),
    #[error("values are not strictly increasing; the map is not a bijection")]
    NotMonotone,
    #[error("malformed rational {0:?}")]
    BadRational(String),
}

/// Parses `"p/q"` or `"p"`; the result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational, PlError> {
    let bad = || PlError::BadRational(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Renders `"p/q"` in lowest terms, or `"p"` when `q = 1`.
pub fn format_rational(q: &Rational) -> String {
    // Ratio's Display already omits a unit denominator.
    q.to_string()
}

fn frac_split(x: &Rational) -> (Rational, Rational) {
    let n = x.floor();
    let f = x - &n;
    (n, f)
}

/// Shared storage: sorted breakpoints on `[0, 1)`, extended so that moving one
/// period right shifts values by `lift` (1 for maps, 0 for cocycles).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Periodic {
    pts: Vec<(Rational, Rational)>,
}

impl Periodic {
    fn normalize(points: &[(Rational, Rational)], lift: &Rational) -> Result<Self, PlError> {
        if points.is_empty() {
            return Err(PlError::Empty);
        }
        let mut pts: Vec<(Rational, Rational)> = points
            .iter()
            .map(|(x, y)| {
                let (n, f) = frac_split(x);
                (f, y - n * lift)
            })
            .collect();
        pts.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(pts.len());
        for p in pts {
            match out.last() {
                Some(last) if last.0 == p.0 => {
                    if last.1 != p.1 {
                        return Err(PlError::InconsistentDuplicate(format_rational(&p.0)));
                    }
                }
                _ => out.push(p),
            }
        }
        Ok(Periodic { pts: out })
    }

    fn left_wrap(&self, lift: &Rational) -> (Rational, Rational) {
        let (x, y) = self.pts.last().expect("non-empty");
        (x - Rational::one(), y - lift)
    }

    fn right_wrap(&self, lift: &Rational) -> (Rational, Rational) {
        let (x, y) = &self.pts[0];
        (x + Rational::one(), y + lift)
    }

    fn eval(&self, lift: &Rational, x: &Rational) -> Rational {
        let (n, f) = frac_split(x);
        // Index of the first breakpoint strictly right of f.
        let i = self.pts.partition_point(|(px, _)| px <= &f);
        let left = if i == 0 { self.left_wrap(lift) } else { self.pts[i - 1].clone() };
        let right = if i == self.pts.len() { self.right_wrap(lift) } else { self.pts[i].clone() };
        let value = if left.0 == f {
            left.1
        } else {
            let t = (&f - &left.0) / (&right.0 - &left.0);
            &left.1 + t * (&right.1 - &left.1)
        };
        value + n * lift
    }

    fn segment_slopes(&self, lift: &Rational) -> Vec<Rational> {
        let k = self.pts.len();
        (0..k)
            .map(|i| {
                let (x0, y0) = &self.pts[i];
                let (x1, y1) = if i + 1 < k { self.pts[i + 1].clone() } else { self.right_wrap(lift) };
                (y1 - y0) / (x1 - x0)
            })
            .collect()
    }

    /// Drops every breakpoint whose two adjacent slopes agree. A function with
    /// no essential breakpoint is stored as the single point `(0, f(0))`.
    fn canonicalize(self, lift: &Rational) -> Self {
        let k = self.pts.len();
        let slopes = self.segment_slopes(lift);
        let keep: Vec<(Rational, Rational)> = (0..k)
            .filter(|&i| slopes[(i + k - 1) % k] != slopes[i])
            .map(|i| self.pts[i].clone())
            .collect();
        if keep.is_empty() {
            let v = self.eval(lift, &Rational::zero());
            Periodic { pts: vec![(Rational::zero(), v)] }
        } else {
            Periodic { pts: keep }
        }
    }

    fn essential_xs(&self) -> Vec<Rational> {
        if self.pts.len() < 2 {
            Vec::new()
        } else {
            self.pts.iter().map(|(x, _)| x.clone()).collect()
        }
    }
}

fn merge_xs(mut xs: Vec<Rational>) -> Vec<Rational> {
    xs.sort();
    xs.dedup();
    xs
}

/// A piecewise-linear increasing bijection `φ` of the line with
/// `φ(x + 1) = φ(x) + 1`, stored canonically by its breakpoints in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLMap {
    inner: Periodic,
}

impl PLMap {
    /// Builds the map interpolating `points` (each point is first normalized
    /// to `(x mod 1, y - floor(x))`).
    pub fn new(points: &[(Rational, Rational)]) -> Result<Self, PlError> {
        let one = Rational::one();
        let p = Periodic::normalize(points, &one)?;
        let increasing = p.pts.windows(2).all(|w| w[0].1 < w[1].1);
        let wraps = p.pts.last().unwrap().1 < &p.pts[0].1 + &one;
        if !increasing || !wraps {
            return Err(PlError::NotMonotone);
        }
        Ok(PLMap { inner: p.canonicalize(&one) })
    }

    pub fn identity() -> Self {
        Self::translation(Rational::zero())
    }

    /// `x ↦ x + t`.
    pub fn translation(t: Rational) -> Self {
        PLMap { inner: Periodic { pts: vec![(Rational::zero(), t)] } }
    }

    /// Canonical breakpoint list. A translation is stored as the single point
    /// `(0, t)`, which is not a point of non-differentiability.
    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.inner.pts
    }

    /// The points of non-differentiability in `[0, 1)`.
    pub fn breakpoint_xs(&self) -> Vec<Rational> {
        self.inner.essential_xs()
    }

    /// The offset `t` if this map is `x ↦ x + t`.
    pub fn as_translation(&self) -> Option<Rational> {
        match self.inner.pts.as_slice() {
            [(x, y)] => Some(y - x),
            _ => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.as_translation().is_some_and(|t| t.is_zero())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.inner.eval(&Rational::one(), x)
    }

    /// `x ↦ next(self(x))`.
    pub fn compose(&self, next: &PLMap) -> PLMap {
        let inv = self.invert();
        let mut xs = self.breakpoint_xs();
        xs.extend(next.breakpoint_xs().iter().map(|b| frac_split(&inv.eval(b)).1));
        if xs.is_empty() {
            xs.push(Rational::zero());
        }
        let pts: Vec<_> = merge_xs(xs)
            .into_iter()
            .map(|x| {
                let y = next.eval(&self.eval(&x));
                (x, y)
            })
            .collect();
        PLMap::new(&pts).expect("composition of increasing bijections is an increasing bijection")
    }

    pub fn invert(&self) -> PLMap {
        let swapped: Vec<_> = self.inner.pts.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        PLMap::new(&swapped).expect("inverse of an increasing bijection is an increasing bijection")
    }
}

impl fmt::Debug for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PLMap{}", PointList(&self.inner.pts))
    }
}

/// A period-1 piecewise-linear function `ψ` of the line, stored canonically by
/// its breakpoints in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLCocycle {
    inner: Periodic,
}

impl PLCocycle {
    /// Builds the cocycle interpolating `points`, each normalized to `(x mod 1, v)`.
    pub fn new(points: &[(Rational, Rational)]) -> Result<Self, PlError> {
        let zero = Rational::zero();
        let p = Periodic::normalize(points, &zero)?;
        Ok(PLCocycle { inner: p.canonicalize(&zero) })
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn constant(c: Rational) -> Self {
        PLCocycle { inner: Periodic { pts: vec![(Rational::zero(), c)] } }
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.inner.pts
    }

    pub fn breakpoint_xs(&self) -> Vec<Rational> {
        self.inner.essential_xs()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.inner.pts.as_slice() {
            [(_, v)] => Some(v.clone()),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_zero())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.inner.eval(&Rational::zero(), x)
    }

    fn sampled(xs: Vec<Rational>, f: impl Fn(&Rational) -> Rational) -> PLCocycle {
        let mut xs = merge_xs(xs);
        if xs.is_empty() {
            xs.push(Rational::zero());
        }
        let pts: Vec<_> = xs.into_iter().map(|x| {
            let v = f(&x);
            (x, v)
        }).collect();
        PLCocycle::new(&pts).expect("sample points are distinct in [0,1)")
    }

    pub fn add(&self, other: &PLCocycle) -> PLCocycle {
        let mut xs = self.breakpoint_xs();
        xs.extend(other.breakpoint_xs());
        Self::sampled(xs, |x| self.eval(x) + other.eval(x))
    }

    pub fn negate(&self) -> PLCocycle {
        let pts: Vec<_> = self.inner.pts.iter().map(|(x, v)| (x.clone(), -v)).collect();
        PLCocycle { inner: Periodic { pts } }
    }

    /// `x ↦ self(map(x))`. Breakpoints of the result are those of `map` together
    /// with the preimages of this cocycle's breakpoints.
    pub fn pullback(&self, map: &PLMap) -> PLCocycle {
        let inv = map.invert();
        let mut xs = map.breakpoint_xs();
        xs.extend(self.breakpoint_xs().iter().map(|b| frac_split(&inv.eval(b)).1));
        Self::sampled(xs, |x| self.eval(&map.eval(x)))
    }
}

impl fmt::Debug for PLCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PLCocycle{}", PointList(&self.inner.pts))
    }
}

struct PointList<'a>(&'a [(Rational, Rational)]);

impl fmt::Display for PointList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (x, y)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        PointList(&self.inner.pts).fmt(f)
    }
}

impl fmt::Display for PLCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        PointList(&self.inner.pts).fmt(f)
    }
}

/// The breakpoint list as `[["p/q", "p/q"], ...]`.
pub fn points_to_strings(pts: &[(Rational, Rational)]) -> Vec<[String; 2]> {
    pts.iter().map(|(x, y)| [format_rational(x), format_rational(y)]).collect()
}

pub fn points_from_strings(raw: &[[String; 2]]) -> Result<Vec<(Rational, Rational)>, PlError> {
    raw.iter()
        .map(|[x, y]| Ok((parse_rational(x)?, parse_rational(y)?)))
        .collect()
}

impl Serialize for PLMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        points_to_strings(&self.inner.pts).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PLMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<[String; 2]>::deserialize(d)?;
        let pts = points_from_strings(&raw).map_err(de::Error::custom)?;
        PLMap::new(&pts).map_err(de::Error::custom)
    }
}

impl Serialize for PLCocycle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        points_to_strings(&self.inner.pts).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PLCocycle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<[String; 2]>::deserialize(d)?;
        let pts = points_from_strings(&raw).map_err(de::Error::custom)?;
        PLCocycle::new(&pts).map_err(de::Error::custom)
    }
}

/// `δ₀`: interpolates `n + 1/3 ↦ n + 1/6` and `n + 2/3 ↦ n + 5/6`.
pub fn delta0() -> PLMap {
    PLMap::new(&[(rat(1, 3), rat(1, 6)), (rat(2, 3), rat(5, 6))]).expect("valid")
}

/// `γ₀`: interpolates `n ↦ 3` and `n + 1/2 ↦ -3`.
pub fn gamma0() -> PLCocycle {
    PLCocycle::new(&[(int(0), int(3)), (rat(1, 2), int(-3))]).expect("valid")
}
