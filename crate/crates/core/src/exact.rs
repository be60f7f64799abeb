//! Exact rational points, convex polygons, hulls and areas.
//!
//! Every coordinate is a reduced [`Rational`] backed by arbitrary precision
//! integers. Polygons are stored as strictly convex counterclockwise vertex
//! cycles starting at their lexicographically smallest vertex, so two equal
//! polygons are also structurally equal.

use std::cmp::Ordering;
use std::fmt;

use num::integer::Integer;
use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` in lowest terms with `q > 0`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => {
            (n.trim().parse::<BigInt>().map_err(|_| bad())?, d.trim().parse::<BigInt>().map_err(|_| bad())?)
        }
        None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if !d.is_positive() {
        return Err(Error::Parse(format!("denominator must be positive in {s:?}")));
    }
    if !n.gcd(&d).is_one() {
        return Err(Error::Parse(format!("{s:?} is not in lowest terms")));
    }
    Ok(Rational::new_raw(n, d))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    /// Point with coordinates `(xn/xd, yn/yd)`.
    pub fn frac(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Self::new(rat(xn, xd), rat(yn, yd))
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Self::new(int(x), int(y))
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    fn sub(&self, o: &Point) -> (Rational, Rational) {
        (&self.x - &o.x, &self.y - &o.y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", fmt_rational(&self.x), fmt_rational(&self.y))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Twice the signed area of the triangle `a, b, c`; positive for a left turn.
pub fn cross(a: &Point, b: &Point, c: &Point) -> Rational {
    let (ux, uy) = b.sub(a);
    let (vx, vy) = c.sub(a);
    ux * vy - uy * vx
}

/// A strictly convex rational polygon, counterclockwise, starting at its
/// lexicographically smallest vertex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Validates a counterclockwise strictly convex cycle (any starting
    /// vertex) and rotates it into the canonical starting position.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidPolygon(format!("{n} vertices, need at least 3")));
        }
        for j in 0..n {
            let c = cross(&vertices[j], &vertices[(j + 1) % n], &vertices[(j + 2) % n]);
            if !c.is_positive() {
                return Err(Error::InvalidPolygon(format!(
                    "turn at {:?} is not strictly counterclockwise",
                    vertices[(j + 1) % n]
                )));
            }
        }
        // Only left turns can still wind more than once (a pentagram does).
        let upper_half = |j: usize| {
            let (dx, dy) = vertices[(j + 1) % n].sub(&vertices[j]);
            dy.is_positive() || (dy.is_zero() && dx.is_positive())
        };
        let wraps = (0..n).filter(|&j| !upper_half(j) && upper_half((j + 1) % n)).count();
        if wraps != 1 {
            return Err(Error::InvalidPolygon("vertex cycle winds more than once".into()));
        }
        Ok(Self::from_ccw_unchecked(vertices))
    }

    pub(crate) fn from_ccw_unchecked(mut vertices: Vec<Point>) -> Self {
        let start = (0..vertices.len()).min_by(|&a, &b| vertices[a].cmp(&vertices[b])).unwrap_or(0);
        vertices.rotate_left(start);
        Self { vertices }
    }

    /// Convex hull of `points`, failing unless it is two-dimensional.
    pub fn hull_of(points: impl IntoIterator<Item = Point>) -> Result<Self> {
        match convex_hull(points) {
            Hull::Poly(p) => Ok(p),
            other => Err(Error::InvalidPolygon(format!("hull is degenerate ({})", other.kind()))),
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Edges as `(start, end)` pairs in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> {
        let n = self.vertices.len();
        (0..n).map(move |j| (&self.vertices[j], &self.vertices[(j + 1) % n]))
    }

    pub fn area(&self) -> Rational {
        polygon_area(self)
    }

    pub fn denominator(&self) -> BigInt {
        denominator(self)
    }

    /// Vertices of `kP` as integer pairs. `k` must clear all denominators.
    pub fn scaled(&self, k: &BigInt) -> Option<Vec<(BigInt, BigInt)>> {
        let kr = Rational::from_integer(k.clone());
        self.vertices
            .iter()
            .map(|v| {
                let x = &v.x * &kr;
                let y = &v.y * &kr;
                (x.is_integer() && y.is_integer()).then(|| (x.to_integer(), y.to_integer()))
            })
            .collect()
    }

    /// The polygon with vertices `verts / k`, where `verts` is a
    /// counterclockwise strictly convex cycle.
    pub(crate) fn from_scaled<I: Into<BigInt> + Clone>(k: &BigInt, verts: &[(I, I)]) -> Self {
        let pts = verts
            .iter()
            .map(|(x, y)| {
                Point::new(Rational::new(x.clone().into(), k.clone()), Rational::new(y.clone().into(), k.clone()))
            })
            .collect();
        Self::from_ccw_unchecked(pts)
    }

    /// Dilation by a positive integer factor.
    pub fn dilate(&self, t: &BigInt) -> Self {
        let tr = Rational::from_integer(t.clone());
        Self { vertices: self.vertices.iter().map(|v| Point::new(&v.x * &tr, &v.y * &tr)).collect() }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.edges().all(|(a, b)| !cross(a, b, p).is_negative())
    }

    pub fn contains_strictly(&self, p: &Point) -> bool {
        self.edges().all(|(a, b)| cross(a, b, p).is_positive())
    }
}

impl fmt::Debug for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv(")?;
        for (j, v) in self.vertices.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v:?}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Result of a convex hull computation, degenerate shapes included.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Hull {
    Empty,
    SinglePoint(Point),
    Segment(Point, Point),
    Poly(Polygon),
}

impl Hull {
    /// Dimension of the hull, `-1` for the empty set.
    pub fn dim(&self) -> i32 {
        match self {
            Hull::Empty => -1,
            Hull::SinglePoint(_) => 0,
            Hull::Segment(..) => 1,
            Hull::Poly(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Hull::Empty => "empty",
            Hull::SinglePoint(_) => "point",
            Hull::Segment(..) => "segment",
            Hull::Poly(_) => "polygon",
        }
    }

    pub fn points(&self) -> Vec<Point> {
        match self {
            Hull::Empty => vec![],
            Hull::SinglePoint(p) => vec![p.clone()],
            Hull::Segment(a, b) => vec![a.clone(), b.clone()],
            Hull::Poly(p) => p.vertices().to_vec(),
        }
    }
}

/// Monotone chain hull with exact orientation tests; collinear boundary
/// points are dropped.
pub fn convex_hull(points: impl IntoIterator<Item = Point>) -> Hull {
    let mut pts: Vec<Point> = points.into_iter().collect();
    pts.sort();
    pts.dedup();
    match pts.len() {
        0 => return Hull::Empty,
        1 => return Hull::SinglePoint(pts.pop().unwrap()),
        _ => {}
    }
    let half = |iter: &mut dyn Iterator<Item = &Point>| {
        let mut chain: Vec<Point> = Vec::new();
        for p in iter {
            while chain.len() >= 2 && !cross(&chain[chain.len() - 2], &chain[chain.len() - 1], p).is_positive() {
                chain.pop();
            }
            chain.push(p.clone());
        }
        chain
    };
    let mut lower = half(&mut pts.iter());
    let mut upper = half(&mut pts.iter().rev());
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        let first = pts.first().unwrap().clone();
        let last = pts.last().unwrap().clone();
        return Hull::Segment(first, last);
    }
    Hull::Poly(Polygon::from_ccw_unchecked(lower))
}

/// Exact Euclidean area by the shoelace formula.
pub fn polygon_area(p: &Polygon) -> Rational {
    let twice: Rational = p.edges().map(|(a, b)| &a.x * &b.y - &a.y * &b.x).fold(Rational::zero(), |acc, t| acc + t);
    twice / int(2)
}

/// The integer `2k^2 area(P)`.
pub fn normalized_area(p: &Polygon, k: &BigInt) -> Result<BigInt> {
    if !k.is_positive() {
        return Err(Error::Domain(format!("k = {k} must be positive")));
    }
    let v = polygon_area(p) * Rational::from_integer(BigInt::from(2) * k * k);
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(Error::NonIntegralNormalization { k: k.to_string() })
    }
}

/// Least `k >= 1` such that `kP` has integral vertices.
pub fn denominator(p: &Polygon) -> BigInt {
    p.vertices().iter().flat_map(|v| [v.x.denom(), v.y.denom()]).fold(BigInt::one(), |acc, d| acc.lcm(d))
}

/// Lexicographic comparison helper used by callers that sort points.
pub fn lex_cmp(a: &Point, b: &Point) -> Ordering {
    a.cmp(b)
}
