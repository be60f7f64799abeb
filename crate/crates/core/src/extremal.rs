//! Closed-form bounds and explicit extremal polygons.
//!
//! Every constructor verifies its output with the exact lattice-point
//! oracle before returning it.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::fmt;
use std::str::FromStr;

use num::{BigInt, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{int, rat, Point, Polygon, Rational};
use crate::grid::{self, Pt};
use crate::lattice::{lattice_stats, strip_profile, LatticeStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    ScottMax,
    AreaMin2D,
    AreaMinCollinear,
    AreaMax,
    HalfIntegralN2,
    UnitStripEquality,
}

impl FamilyKind {
    fn prefix(self) -> &'static str {
        match self {
            FamilyKind::ScottMax => "scott",
            FamilyKind::AreaMin2D => "min",
            FamilyKind::AreaMinCollinear => "mincol",
            FamilyKind::AreaMax => "max",
            FamilyKind::HalfIntegralN2 => "half",
            FamilyKind::UnitStripEquality => "unit-strip",
        }
    }

    fn from_prefix(s: &str) -> Option<Self> {
        [
            FamilyKind::ScottMax,
            FamilyKind::AreaMin2D,
            FamilyKind::AreaMinCollinear,
            FamilyKind::AreaMax,
            FamilyKind::HalfIntegralN2,
            FamilyKind::UnitStripEquality,
        ]
        .into_iter()
        .find(|t| t.prefix() == s)
    }
}

/// Names one member of an extremal family, e.g. `min/2a?k=3&i=1&b=3&x=0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyId {
    pub theorem: FamilyKind,
    pub label: String,
    pub k: u64,
    pub i: u64,
    pub b: u64,
    pub x: Option<u64>,
}

impl FamilyId {
    pub fn new(theorem: FamilyKind, label: &str, k: u64, i: u64, b: u64, x: Option<u64>) -> Self {
        Self { theorem, label: label.to_string(), k, i, b, x }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}?k={}&i={}&b={}", self.theorem.prefix(), self.label, self.k, self.i, self.b)?;
        if let Some(x) = self.x {
            write!(f, "&x={x}")?;
        }
        Ok(())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed family id {s:?}"));
        let (head, query) = s.split_once('?').ok_or_else(bad)?;
        let (prefix, label) = head.split_once('/').ok_or_else(bad)?;
        let theorem = FamilyKind::from_prefix(prefix).ok_or_else(bad)?;
        let (mut k, mut i, mut b, mut x) = (None, None, None, None);
        for kv in query.split('&') {
            let (key, val) = kv.split_once('=').ok_or_else(bad)?;
            let val: u64 = val.parse().map_err(|_| bad())?;
            let slot = match key {
                "k" => &mut k,
                "i" => &mut i,
                "b" => &mut b,
                "x" => &mut x,
                _ => return Err(bad()),
            };
            *slot = Some(val);
        }
        Ok(FamilyId {
            theorem,
            label: label.to_string(),
            k: k.ok_or_else(bad)?,
            i: i.ok_or_else(bad)?,
            b: b.ok_or_else(bad)?,
            x,
        })
    }
}

impl Serialize for FamilyId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FamilyId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parameters of an upper-bound case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCase {
    pub k: u64,
    pub i: u64,
    pub b: u64,
    pub b_max: u64,
    pub b_tilde: u64,
}

impl BoundCase {
    pub fn new(k: u64, i: u64, b: u64) -> Result<Self> {
        let b_max = b_max(k, i)?;
        if b > b_max {
            return Err(Error::Domain(format!("b = {b} exceeds b_max = {b_max}")));
        }
        Ok(Self { k, i, b, b_max, b_tilde: b_max - b })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HullDim {
    /// two-dimensional integer hull
    Two,
    /// integer hull empty, a point or a segment
    Collinear,
}

/// Largest possible boundary count `(k+1)(i+1)+3`.
pub fn b_max(k: u64, i: u64) -> Result<u64> {
    if k < 2 {
        return Err(Error::Domain(format!(
            "b_max needs k >= 2 (got {k}); use scott_classical_bound for lattice polygons"
        )));
    }
    if i < 1 {
        return Err(Error::Domain("b_max needs i >= 1".into()));
    }
    Ok((k + 1) * (i + 1) + 3)
}

/// Scott's bound for lattice polygons: 9 for `i = 1`, `2i+6` otherwise.
pub fn scott_classical_bound(i: u64) -> Result<u64> {
    match i {
        0 => Err(Error::Domain("Scott's bound needs i >= 1".into())),
        1 => Ok(9),
        _ => Ok(2 * i + 6),
    }
}

fn ck(k: u64) -> i64 {
    k as i64
}

fn pt(x: Rational, y: Rational) -> Point {
    Point::new(x, y)
}

fn hull(points: Vec<Point>) -> Polygon {
    Polygon::hull_of(points).expect("family vertices span a polygon")
}

/// Checks a construction against the oracle.
fn verified(p: Polygon, k: u64, i: u64, b: u64, area_k: Option<&BigInt>, what: &str) -> Result<Polygon> {
    let s = lattice_stats(&p);
    let ok = s.i == i && s.b == b && s.k == BigInt::from(k) && area_k.is_none_or(|a| &s.area_k == a);
    if ok {
        Ok(p)
    } else {
        Err(Error::InvalidPolygon(format!(
            "{what} failed verification: expected (i,b,k) = ({i},{b},{k}), got ({},{},{}) with Area_k {}",
            s.i, s.b, s.k, s.area_k
        )))
    }
}

pub fn scott_maximizer(k: u64, i: u64) -> Result<Polygon> {
    let bm = b_max(k, i)?;
    let kk = ck(k);
    let p = hull(vec![pt(int(0), rat(1, kk)), pt(int(0), int(-1)), pt(int(((k + 1) * (i + 1)) as i64), int(-1))]);
    verified(p, k, i, bm, None, "Scott maximizer")
}

pub fn min_area(k: u64, i: u64, b: u64, dim: HullDim) -> Result<Rational> {
    let bm = b_max(k, i)?;
    let (kk, ii, bb) = (ck(k), i as i64, b as i64);
    match dim {
        HullDim::Two => {
            if b < 2 || b > bm {
                return Err(Error::Domain(format!("two-dimensional integer hull needs 2 <= b <= {bm}")));
            }
            Ok(rat(ii * (kk + 1) + 1, 2 * kk) + rat(bb, 2) - int(1))
        }
        HullDim::Collinear => match b {
            0 => Ok(rat(ii - 1, kk) + rat(3, 2 * kk * kk)),
            1 => Ok(rat(ii, kk) + rat(1, 2 * kk * kk)),
            2 => Ok(rat(ii + 1, kk)),
            _ => Err(Error::Domain("a collinear integer hull forces b <= 2".into())),
        },
    }
}

/// Normalized form `2k^2 area` of a rational area at denominator `k`.
fn normalized(k: u64, area: &Rational) -> BigInt {
    let v = area * int(2 * ck(k) * ck(k));
    debug_assert!(v.is_integer());
    v.to_integer()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minimizer {
    pub id: FamilyId,
    pub polygon: Polygon,
    /// also minimal among polygons with the other hull dimension
    pub global_minimum: bool,
}

pub fn area_minimizers(k: u64, i: u64, b: u64, dim: HullDim) -> Result<Vec<Minimizer>> {
    let bm = b_max(k, i)?;
    let area = min_area(k, i, b, dim)?;
    let target = normalized(k, &area);
    let (kk, ii, bb) = (ck(k), i as i64, b as i64);
    let top = || pt(rat(-1, kk), rat(1, kk));
    let mut out: Vec<(FamilyId, Polygon)> = Vec::new();
    let id = |th, label, x| FamilyId::new(th, label, k, i, b, x);
    match dim {
        HullDim::Two => {
            if b + 2 * (k + 1) == bm {
                let v = vec![pt(int(0), int(-1)), pt(int(ii * (kk + 1) - kk + 1), int(-1)), top()];
                out.push((id(FamilyKind::AreaMin2D, "0a", None), hull(v)));
            }
            if b + k < bm {
                let v = vec![pt(int(0), int(-1)), pt(int(bb - 2), int(-1)), pt(int(ii), int(0)), top()];
                out.push((id(FamilyKind::AreaMin2D, "1a", None), hull(v)));
            }
            if (i, b) == (3, 3) {
                let v = vec![pt(int(0), int(-2)), pt(int(2), int(0)), top()];
                out.push((id(FamilyKind::AreaMin2D, "1b", None), hull(v)));
            }
            if b >= 3 {
                for x in 0..=(bm - b) / 2 {
                    let v = vec![
                        pt(int(0), int(0)),
                        pt(int(0), int(-1)),
                        pt(int(bb - 3), int(-1)),
                        pt(int(ii + 1), int(0)),
                        pt(rat(x as i64, kk), rat(1, kk)),
                    ];
                    out.push((id(FamilyKind::AreaMin2D, "2a", Some(x)), hull(v)));
                }
            }
            if (i, b) == (1, 5) {
                for x in 0..=k {
                    let v = vec![
                        pt(int(0), int(0)),
                        pt(int(0), int(-2)),
                        pt(int(2), int(0)),
                        pt(rat(x as i64, kk), rat(1, kk)),
                    ];
                    out.push((id(FamilyKind::AreaMin2D, "2b", Some(x)), hull(v)));
                }
            }
        }
        HullDim::Collinear => {
            let a = pt(int(1), rat(1, kk));
            let c = pt(rat(kk - 1, kk), rat(-1, kk));
            match b {
                0 => out.push((
                    id(FamilyKind::AreaMinCollinear, "0c", None),
                    hull(vec![a, c, pt(rat(ii * kk + 1, kk), int(0))]),
                )),
                1 => {
                    out.push((id(FamilyKind::AreaMinCollinear, "1c", None), hull(vec![a, c, pt(int(ii + 1), int(0))])))
                }
                _ => {
                    for x in 0..=k * (i + 1) {
                        let v = vec![
                            pt(int(0), int(0)),
                            pt(int(0), rat(1, kk)),
                            pt(rat(x as i64, kk), rat(-1, kk)),
                            pt(int(ii + 1), int(0)),
                        ];
                        out.push((id(FamilyKind::AreaMinCollinear, "2c", Some(x)), hull(v)));
                    }
                }
            }
        }
    }
    let global_minimum = match dim {
        HullDim::Two if b <= 2 => area <= min_area(k, i, b, HullDim::Collinear)?,
        HullDim::Collinear if b == 2 => area <= min_area(k, i, b, HullDim::Two)?,
        _ => true,
    };
    out.into_iter()
        .map(|(id, p)| {
            let name = id.to_string();
            let p = verified(p, k, i, b, Some(&target), &name)?;
            let got = lattice_stats(&p).hull_dim;
            let dim_ok = match dim {
                HullDim::Two => got == 2,
                HullDim::Collinear => got < 2,
            };
            if !dim_ok {
                return Err(Error::InvalidPolygon(format!("{name} has integer hull of dimension {got}")));
            }
            Ok(Minimizer { id, polygon: p, global_minimum })
        })
        .collect()
}

/// `2k^2` times the upper bound, evaluated for any `k >= 1`.
pub fn max_area_normalized(k: u64, i: u64, b: u64) -> Result<BigInt> {
    if k < 1 || i < 1 {
        return Err(Error::Domain("max area needs k >= 1 and i >= 1".into()));
    }
    let bm = (k + 1) * (i + 1) + 3;
    if b > bm {
        return Err(Error::Domain(format!("b = {b} exceeds b_max = {bm}")));
    }
    let (kk, bt) = (BigInt::from(k), BigInt::from(bm - b));
    let base = &kk * (&kk + 1) * (&kk + 1) * BigInt::from(i + 1);
    let cut = if b + 1 >= bm {
        bt
    } else if b >= 1 {
        BigInt::from(2) + &kk * (bt - 2)
    } else {
        BigInt::from(3) + &kk * (bt - 2)
    };
    Ok(base - cut)
}

/// Upper bound for `k >= 3`; `k = 3` is only established inside the
/// strip `R × [-1, 1/3]` and is reported through [`max_area_is_conjectural`].
pub fn max_area(k: u64, i: u64, b: u64) -> Result<Rational> {
    if k < 3 {
        return Err(Error::Domain(format!("max_area needs k >= 3 (got {k}); use half_integral_max_area for k = 2")));
    }
    BoundCase::new(k, i, b)?;
    let n = max_area_normalized(k, i, b)?;
    Ok(Rational::new(n, BigInt::from(2 * k * k)))
}

pub fn max_area_is_conjectural(k: u64) -> bool {
    k == 3
}

pub fn area_maximizers(k: u64, i: u64, b: u64) -> Result<Vec<(FamilyId, Polygon)>> {
    max_area(k, i, b)?;
    maximizer_families(k, i, b)
}

/// The upper-bound families for any `k >= 2`; for `k = 2` they are the
/// maximizers inside `R × [-1, 1/2]`.
pub fn maximizer_families(k: u64, i: u64, b: u64) -> Result<Vec<(FamilyId, Polygon)>> {
    let case = BoundCase::new(k, i, b)?;
    let target = max_area_normalized(k, i, b)?;
    let (kk, ii, bb) = (ck(k), i as i64, b as i64);
    let (bm, bt) = (case.b_max, case.b_tilde);
    let long = ((k + 1) * (i + 1)) as i64;
    let id = |label, x| FamilyId::new(FamilyKind::AreaMax, label, k, i, b, x);
    let top = || pt(int(0), rat(1, kk));
    let low = |num: i64| pt(rat(num, kk), int(-1));
    let mut out = Vec::new();
    if b + 4 == bm {
        out.push((id("0a", None), hull(vec![top(), low(1), low(long * kk - 1)])));
    }
    if b == 0 {
        out.push((
            id("0b", None),
            hull(vec![top(), low(1), low(kk - 1), pt(rat(kk * kk * (ii + 1) - 1, kk), rat(1 - kk, kk))]),
        ));
    }
    if b >= 1 && b + 3 <= bm {
        out.push((
            id("1a", None),
            hull(vec![top(), low(1), low(bb * kk - 1), pt(int(kk * (ii + 1)), rat(1 - kk, kk))]),
        ));
    }
    if b >= 2 && b + 2 <= bm {
        for x in 0..bt / 2 {
            let xi = x as i64;
            out.push((
                id("2a", Some(x)),
                hull(vec![
                    top(),
                    pt(int(0), rat(1 - kk, kk)),
                    low(xi * kk + 1),
                    low((xi + bb - 1) * kk - 1),
                    pt(int(kk * (ii + 1)), rat(1 - kk, kk)),
                ]),
            ));
        }
    }
    if b + 1 == bm {
        out.push((id("2b", None), hull(vec![top(), pt(int(0), rat(1 - kk, kk)), low(1), low(long * kk)])));
    }
    if b == bm {
        out.push((id("2c", None), hull(vec![top(), low(0), low(long * kk)])));
    }
    out.into_iter()
        .map(|(id, p)| {
            let name = id.to_string();
            verified(p, k, i, b, Some(&target), &name).map(|p| (id, p))
        })
        .collect()
}

/// Sharp upper area bound for denominator two.
pub fn half_integral_max_area(i: u64, b: u64) -> Result<Rational> {
    let (ii, bb) = (i as i64, b as i64);
    match i {
        0 => Err(Error::Domain("half-integral bound needs i >= 1".into())),
        1 => {
            let eighths = match b {
                0..=6 => 21,
                7 => 20,
                8 => 19,
                9 => 18,
                _ => return Err(Error::Domain(format!("b = {b} exceeds 9 for i = 1"))),
            };
            Ok(rat(bb, 4) + rat(eighths, 8))
        }
        _ => {
            let eighths = if b <= 3 * i + 4 {
                8
            } else if b == 3 * i + 5 {
                7
            } else if b == 3 * i + 6 {
                6
            } else {
                return Err(Error::Domain(format!("b = {b} exceeds 3i+6 = {}", 3 * i + 6)));
            };
            Ok(rat(3 * ii, 2) + rat(bb, 4) + rat(eighths, 8))
        }
    }
}

/// The minimum and the strip maximum of `Area_k`. Not every value in
/// between is attained: for `b` close to `b_max` a few values near the
/// minimum are missing, e.g. 171 for `(k,i,b) = (4,1,11)`.
pub fn intermediate_range(k: u64, i: u64, b: u64) -> Result<(BigInt, BigInt)> {
    if k < 2 || b < 3 {
        return Err(Error::Domain("intermediate areas need k >= 2 and b >= 3".into()));
    }
    let lo = normalized(k, &min_area(k, i, b, HullDim::Two)?);
    let hi = max_area_normalized(k, i, b)?;
    Ok((lo, hi))
}

/// A polygon with stats `(i, b)`, denominator `k` and `Area_k = n`.
///
/// Starts from the `(2a)` maximizer and searches best first towards `n` over
/// the bottom edge ends, a second top vertex and two side vertices on the
/// rows between the bottom and the lattice row, all in steps of `1/k`.
/// Fails with `UnreachableArea` when no such polygon has area `n`.
pub fn intermediate_polygon(k: u64, i: u64, b: u64, n: &BigInt) -> Result<Polygon> {
    let (lo, hi) = intermediate_range(k, i, b)?;
    if n < &lo || n > &hi {
        return Err(Error::UnreachableArea { target: n.to_string(), min: lo.to_string(), max: hi.to_string() });
    }
    let kk = ck(k);
    let wide = kk * kk * (i as i64 + 1);
    let bottom = kk * (b as i64 - 1);
    // t: top vertex (t,1); (ml,yl), (mr,yr): side vertices strictly between
    // the bottom row -k and the lattice row 0; sl, sr: ends of the bottom
    const N: usize = 7;
    let start: [i64; N] = [0, 0, 1 - kk, wide, 1 - kk, 1, bottom - 1];
    let bounds = [(0, kk * (i as i64 + 1)), (0, wide), (1 - kk, -1), (0, wide), (1 - kk, -1), (0, bottom), (0, bottom)];
    let goal = n.clone();
    let eval = |s: &[i64; N]| -> Option<(Vec<Pt<i64>>, i64)> {
        let [t, ml, yl, mr, yr, sl, sr] = *s;
        if sl > sr {
            return None;
        }
        let v = [(0, 1), (t, 1), (0, 0), (kk * (i as i64 + 1), 0), (ml, yl), (mr, yr), (sl, -kk), (sr, -kk)];
        let h = grid::convex_hull(&v);
        if h.len() < 3 || grid::denominator(&kk, &h) != kk {
            return None;
        }
        let ok = grid::interior_count(&kk, &h) == i as i64 && grid::boundary_count(&kk, &h) == b as i64;
        ok.then(|| {
            let a = grid::twice_area(&h);
            (h, a)
        })
    };
    let dist = |a: i64| (BigInt::from(a) - &goal).magnitude().clone();
    // unit steps in one or two parameters; some targets are only reached
    // by moving two at once, since single steps pass through other (i, b)
    let moves: Vec<[i64; N]> = (0..3i64.pow(N as u32))
        .map(|code| {
            let mut d = [0i64; N];
            let mut c = code;
            for x in &mut d {
                *x = c % 3 - 1;
                c /= 3;
            }
            d
        })
        .filter(|d| (1..=2).contains(&d.iter().filter(|x| **x != 0).count()))
        .collect();
    let mut seen: HashSet<[i64; N]> = HashSet::new();
    let mut heap = BinaryHeap::new();
    let Some((_, a0)) = eval(&start) else {
        return Err(Error::InvalidPolygon("start maximizer failed verification".into()));
    };
    seen.insert(start);
    heap.push(Reverse((dist(a0), start)));
    while let Some(Reverse((d, s))) = heap.pop() {
        if d.is_zero() {
            let (h, _) = eval(&s).expect("state was valid");
            let p = Polygon::from_scaled(&BigInt::from(kk), &h);
            return verified(p, k, i, b, Some(n), "intermediate polygon");
        }
        for d in &moves {
            let mut s2 = s;
            for c in 0..N {
                s2[c] += d[c];
            }
            let inside = (0..N).all(|c| s2[c] >= bounds[c].0 && s2[c] <= bounds[c].1);
            if !inside || !seen.insert(s2) {
                continue;
            }
            if let Some((_, a)) = eval(&s2) {
                heap.push(Reverse((dist(a), s2)));
            }
        }
    }
    Err(Error::UnreachableArea { target: n.to_string(), min: lo.to_string(), max: hi.to_string() })
}

/// Outcome of the equality test for half-integral polygons in `R × [-1,1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitStripDiagnosis {
    pub holds: bool,
    pub i: u64,
    pub b: u64,
    pub area_2: String,
    pub bound: String,
    /// the slice conditions agree with the area test
    pub conditions_hold: bool,
    pub failures: Vec<String>,
}

/// Tests `Area_2(P) = 12i+2b+8` and the slice conditions characterizing it.
pub fn unit_strip_equality_check(p: &Polygon) -> Result<UnitStripDiagnosis> {
    let s: LatticeStats = lattice_stats(p);
    if s.k != BigInt::from(2) {
        return Err(Error::Domain(format!("denominator must be 2, got {}", s.k)));
    }
    let (y_lo, y_hi) = y_span(p);
    if y_lo < int(-1) || y_hi > int(1) {
        return Err(Error::Domain("polygon must lie in R × [-1,1]".into()));
    }
    let heights = [int(-1), int(0), int(1)];
    let prof = strip_profile(p, &heights);
    let len = |y: i64| prof.lengths.get(&int(y)).cloned().unwrap_or_else(Rational::zero);
    let bd = |y: i64| prof.boundary_counts.get(&y).copied().unwrap_or(0);
    let mut failures = Vec::new();
    for y in [1, -1] {
        if len(y) != int(bd(y) as i64) {
            failures.push(format!("slice length at y={y} is {} but holds {} boundary points", len(y), bd(y)));
        }
    }
    let l0 = int(s.i as i64) + rat(2, 3) + rat(bd(0) as i64, 6);
    if len(0) != l0 {
        failures.push(format!("middle slice length {} differs from i + 2/3 + b_0/6 = {}", len(0), l0));
    }
    if p.vertices().iter().any(|v| v.y.is_zero()) {
        failures.push("not a trapezoid: vertex on y = 0".into());
    }
    if y_hi <= rat(1, 2) || y_lo >= rat(-1, 2) {
        failures.push("realizable in a half strip".into());
    }
    let bound = BigInt::from(12 * s.i + 2 * s.b + 8);
    Ok(UnitStripDiagnosis {
        holds: s.area_k == bound,
        i: s.i,
        b: s.b,
        area_2: s.area_k.to_string(),
        bound: bound.to_string(),
        conditions_hold: failures.is_empty(),
        failures,
    })
}

fn y_span(p: &Polygon) -> (Rational, Rational) {
    let ys = p.vertices().iter().map(|v| v.y.clone());
    let lo = ys.clone().min().expect("nonempty");
    let hi = ys.max().expect("nonempty");
    (lo, hi)
}

/// Normalized area bounds used to confine maximizers to thin strips.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StripBound {
    /// polygons not equivalent to one in `R × [-1,1]`
    OutsideUnitStrip,
    /// polygons in `R × [-1,h/k]` but not lower, `2 <= h <= k`
    Height(u64),
    /// the upper bound at `b = 0`, `k^2(k+1)(i+1) - k - 3`
    Supplement,
}

pub fn strip_bound_formulas(k: u64, i: u64, which: StripBound) -> Result<Rational> {
    if k < 2 || i < 1 {
        return Err(Error::Domain("strip bounds need k >= 2 and i >= 1".into()));
    }
    let (kk, ii) = (ck(k), i as i64);
    match which {
        StripBound::OutsideUnitStrip => {
            let a = int(kk * kk * (4 * ii + 5));
            let c = int(kk * (kk + 2) * (kk + 2) * (ii + 1)) / int(2);
            Ok(a.max(c))
        }
        StripBound::Height(h) => {
            if h < 2 || h > k {
                return Err(Error::Domain(format!("height must satisfy 2 <= h <= k, got {h}")));
            }
            let hh = h as i64;
            Ok(int(kk) * (rat(kk * kk, hh) + int(2 * kk + hh)) * int(ii + 1))
        }
        StripBound::Supplement => Ok(int(kk * kk * (kk + 1) * (ii + 1) - kk - 3)),
    }
}

/// Largest lattice width of a denominator-`k` polygon with `i` interior
/// points, in grid units of `1/k`, from `lw^2 <= 8/3 area`.
pub fn lattice_width_cap(k: u64, i: u64) -> Result<u64> {
    let outside = strip_bound_formulas(k, i, StripBound::OutsideUnitStrip)?;
    // area = Area_k / (2k^2), so (k lw)^2 <= 8/3 * Area_k / 2 = 4/3 Area_k
    let cap = outside * rat(4, 3);
    let mut h = 2 * k;
    while Rational::from_integer(BigInt::from((h + 1) * (h + 1))) <= cap {
        h += 1;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{canonical_form, equivalent};

    fn norm(k: u64, a: &Rational) -> BigInt {
        normalized(k, a)
    }

    #[test]
    fn b_max_and_scott() {
        assert_eq!(b_max(2, 1).unwrap(), 9);
        assert_eq!(b_max(3, 1).unwrap(), 11);
        assert_eq!(b_max(4, 2).unwrap(), 18);
        assert!(b_max(1, 1).is_err());
        assert_eq!(scott_classical_bound(1).unwrap(), 9);
        assert_eq!(scott_classical_bound(3).unwrap(), 12);
        for k in 2..=6 {
            for i in 1..=4 {
                let s = lattice_stats(&scott_maximizer(k, i).unwrap());
                assert_eq!((s.i, s.b), (i, b_max(k, i).unwrap()));
            }
        }
    }

    #[test]
    fn min_area_values() {
        assert_eq!(min_area(3, 1, 3, HullDim::Two).unwrap(), rat(4, 3));
        assert_eq!(min_area(3, 1, 0, HullDim::Collinear).unwrap(), rat(1, 6));
        assert_eq!(min_area(2, 1, 1, HullDim::Collinear).unwrap(), rat(5, 8));
        assert!(min_area(3, 1, 3, HullDim::Collinear).is_err());
    }

    fn pairwise_distinct(ps: &[Polygon]) {
        let keys: HashSet<String> = ps.iter().map(|p| format!("{:?}", canonical_form(p))).collect();
        assert_eq!(keys.len(), ps.len());
    }

    #[test]
    fn minimizer_counts() {
        let m = area_minimizers(3, 1, 3, HullDim::Two).unwrap();
        assert_eq!(m.len(), 7);
        let m2 = area_minimizers(2, 1, 5, HullDim::Two).unwrap();
        assert_eq!(m2.len(), 7);
        let m3 = area_minimizers(3, 1, 2, HullDim::Collinear).unwrap();
        assert_eq!(m3.len(), 7);
        for l in [&m, &m2, &m3] {
            pairwise_distinct(&l.iter().map(|m| m.polygon.clone()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn minimizers_over_grid_verify() {
        for k in 2..=4 {
            for i in 1..=3 {
                let bm = b_max(k, i).unwrap();
                for b in 2..=bm {
                    let ms = area_minimizers(k, i, b, HullDim::Two).unwrap();
                    assert!(!ms.is_empty(), "no minimizer at ({k},{i},{b})");
                    pairwise_distinct(&ms.iter().map(|m| m.polygon.clone()).collect::<Vec<_>>());
                }
                for b in 0..=2 {
                    assert!(!area_minimizers(k, i, b, HullDim::Collinear).unwrap().is_empty());
                }
            }
        }
    }

    #[test]
    fn one_a_at_two_is_global_only_for_k2_i1() {
        let global = |k, i| area_minimizers(k, i, 2, HullDim::Two).unwrap().iter().all(|m| m.global_minimum);
        assert!(global(2, 1));
        assert!(!global(3, 1));
        assert!(!global(2, 2));
    }

    #[test]
    fn max_area_values() {
        let n = |b| max_area_normalized(4, 1, b).unwrap();
        assert_eq!([n(13), n(1), n(0), n(9)], [200, 158, 153, 190].map(BigInt::from));
        assert_eq!(max_area(4, 1, 13).unwrap(), rat(25, 4));
        assert_eq!(max_area(4, 1, 1).unwrap(), rat(79, 16));
        assert_eq!(max_area(4, 1, 0).unwrap(), rat(153, 32));
        assert!(max_area(2, 1, 0).is_err());
        assert!(max_area_is_conjectural(3));
    }

    #[test]
    fn maximizer_lists() {
        let labels =
            |b| area_maximizers(4, 1, b).unwrap().into_iter().map(|(id, _)| id.to_string()).collect::<Vec<_>>();
        assert_eq!(labels(13), ["max/2c?k=4&i=1&b=13"]);
        assert_eq!(labels(12), ["max/2b?k=4&i=1&b=12"]);
        assert_eq!(labels(9).len(), 4);
        for k in 4..=5 {
            for i in 1..=2 {
                for b in 0..=b_max(k, i).unwrap() {
                    let ms = area_maximizers(k, i, b).unwrap();
                    pairwise_distinct(&ms.into_iter().map(|(_, p)| p).collect::<Vec<_>>());
                }
            }
        }
    }

    #[test]
    fn k_one_formulas_agree_with_shifted_pick() {
        for i in 1..=5u64 {
            for b in 3..=(2 * (i + 1) + 1) {
                let lo = rat(2 * i as i64 + 1, 2) + rat(b as i64, 2) - int(1);
                let hi = Rational::new(max_area_normalized(1, i, b).unwrap(), BigInt::from(2));
                let pick = int(i as i64) + rat(b as i64, 2) - rat(1, 2);
                assert_eq!(lo, pick);
                assert_eq!(hi, pick);
            }
        }
    }

    #[test]
    fn half_integral_values() {
        assert_eq!(half_integral_max_area(2, 0).unwrap(), int(4));
        assert_eq!(half_integral_max_area(1, 9).unwrap(), rat(9, 2));
        assert_eq!(half_integral_max_area(3, 14).unwrap(), rat(71, 8));
        assert!(half_integral_max_area(1, 10).is_err());
        // one unit of excess for b = 0 and for i = 1, b <= 6; both at (1,0)
        for i in 1..=4u64 {
            let top = if i == 1 { 9 } else { 3 * i + 6 };
            for b in 0..=top {
                let generic = Rational::new(max_area_normalized(2, i, b).unwrap(), BigInt::from(8));
                let diff = half_integral_max_area(i, b).unwrap() - generic;
                let units = i64::from(b == 0) + i64::from(i == 1 && b <= 6);
                let expect = rat(units, 8);
                assert_eq!(diff, expect, "(i,b) = ({i},{b})");
            }
        }
    }

    #[test]
    fn intermediate_areas_cover_range() {
        let (lo, hi) = intermediate_range(3, 1, 8).unwrap();
        assert_eq!((lo.clone(), hi.clone()), (BigInt::from(69), BigInt::from(91)));
        for n in 69..=91 {
            let p = intermediate_polygon(3, 1, 8, &BigInt::from(n)).unwrap();
            assert_eq!(lattice_stats(&p).area_k, BigInt::from(n));
        }
        assert!(matches!(intermediate_polygon(3, 1, 8, &BigInt::from(92)), Err(Error::UnreachableArea { .. })));
        let top = intermediate_polygon(3, 1, 8, &hi).unwrap();
        assert!(maximizer_families(3, 1, 8).unwrap().iter().any(|(_, q)| equivalent(q, &top)));
    }

    fn hexagon() -> Polygon {
        Polygon::hull_of(vec![
            Point::frac(-1, 2, 1, 1),
            Point::frac(-3, 2, 1, 1),
            Point::frac(-5, 2, -1, 1),
            Point::frac(-1, 2, -1, 1),
            Point::frac(3, 2, -1, 2),
            Point::frac(1, 2, 1, 2),
        ])
        .unwrap()
    }

    #[test]
    fn unit_strip_hexagon() {
        let d = unit_strip_equality_check(&hexagon()).unwrap();
        assert!(d.holds && d.conditions_hold, "{d:?}");
        assert_eq!((d.i, d.b, d.area_2.as_str()), (2, 5, "42"));
        let pulled = Polygon::hull_of(vec![
            Point::frac(-1, 2, 1, 1),
            Point::frac(-3, 2, 1, 1),
            Point::frac(-5, 2, -1, 1),
            Point::frac(-1, 2, -1, 1),
            Point::frac(1, 1, -1, 2),
            Point::frac(0, 1, 1, 2),
        ])
        .unwrap();
        let d2 = unit_strip_equality_check(&pulled).unwrap();
        assert!(!d2.holds);
        assert!(!d2.conditions_hold);
        let with_mid =
            Polygon::hull_of(vec![Point::frac(-1, 2, 1, 1), Point::frac(-3, 2, -1, 1), Point::frac(3, 2, 0, 1)])
                .unwrap();
        let d3 = unit_strip_equality_check(&with_mid).unwrap();
        assert!(!d3.holds);
        assert!(d3.failures.iter().any(|f| f.contains("not a trapezoid")));
    }

    #[test]
    fn strip_bounds() {
        assert_eq!(strip_bound_formulas(4, 1, StripBound::OutsideUnitStrip).unwrap(), int(144));
        assert_eq!(strip_bound_formulas(4, 1, StripBound::Height(2)).unwrap(), int(144));
        assert_eq!(strip_bound_formulas(4, 1, StripBound::Supplement).unwrap(), int(153));
        assert!(strip_bound_formulas(4, 1, StripBound::Height(5)).is_err());
        assert_eq!(norm(4, &max_area(4, 1, 0).unwrap()), BigInt::from(153));
    }

    #[test]
    fn width_caps() {
        // k=3, i=1: area <= 81/18 gives lw <= 10/3
        assert_eq!(lattice_width_cap(3, 1).unwrap(), 10);
        assert_eq!(lattice_width_cap(2, 1).unwrap(), 6);
        assert_eq!(lattice_width_cap(2, 2).unwrap(), 8);
    }

    #[test]
    fn family_id_round_trip() {
        let id = FamilyId::new(FamilyKind::AreaMin2D, "2a", 3, 1, 3, Some(0));
        assert_eq!(id.to_string(), "min/2a?k=3&i=1&b=3&x=0");
        assert_eq!(id.to_string().parse::<FamilyId>().unwrap(), id);
        let json = serde_json::to_string(&id).unwrap();
        assert_eq!(serde_json::from_str::<FamilyId>(&json).unwrap(), id);
        assert!("min/2a".parse::<FamilyId>().is_err());
    }
}
