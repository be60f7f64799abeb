//! Lattice-point statistics, integer hulls, unimodular maps, canonical
//! forms and lattice width.

use std::collections::BTreeMap;

use num::{BigInt, Integer, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{convex_hull, normalized_area, polygon_area, Hull, Point, Polygon, Rational};
use crate::grid::{self, Pt};

/// `v -> Mv + z` with `det M = ±1` and `z` integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularAffineMap {
    matrix: [[i64; 2]; 2],
    translation: [i64; 2],
}

impl UnimodularAffineMap {
    pub fn new(matrix: [[i64; 2]; 2], translation: [i64; 2]) -> Result<Self> {
        let m = Self { matrix, translation };
        match m.det() {
            1 | -1 => Ok(m),
            d => Err(Error::Domain(format!("determinant {d} is not ±1"))),
        }
    }

    pub fn identity() -> Self {
        Self { matrix: [[1, 0], [0, 1]], translation: [0, 0] }
    }

    pub fn translation(z: [i64; 2]) -> Self {
        Self { matrix: [[1, 0], [0, 1]], translation: z }
    }

    pub fn linear(matrix: [[i64; 2]; 2]) -> Result<Self> {
        Self::new(matrix, [0, 0])
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.matrix
    }

    pub fn translation_part(&self) -> [i64; 2] {
        self.translation
    }

    pub fn det(&self) -> i64 {
        let m = self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let (a, b) = (self.matrix, other.matrix);
        let mul = |x: i64, y: i64| x.checked_mul(y).expect("map entries overflow i64");
        let mut matrix = [[0i64; 2]; 2];
        for (r, row) in matrix.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = mul(a[r][0], b[0][c]) + mul(a[r][1], b[1][c]);
            }
        }
        let t = other.translation;
        let translation = [
            mul(a[0][0], t[0]) + mul(a[0][1], t[1]) + self.translation[0],
            mul(a[1][0], t[0]) + mul(a[1][1], t[1]) + self.translation[1],
        ];
        Self { matrix, translation }
    }

    pub fn inverse(&self) -> Self {
        let d = self.det();
        let m = self.matrix;
        // inverse of a determinant ±1 matrix is its adjugate times d
        let inv = [[d * m[1][1], -d * m[0][1]], [-d * m[1][0], d * m[0][0]]];
        let t = self.translation;
        let translation = [-(inv[0][0] * t[0] + inv[0][1] * t[1]), -(inv[1][0] * t[0] + inv[1][1] * t[1])];
        Self { matrix: inv, translation }
    }

    pub fn apply_point(&self, p: &Point) -> Point {
        let m = self.matrix;
        let r = |v: i64| Rational::from_integer(BigInt::from(v));
        Point::new(
            &p.x * r(m[0][0]) + &p.y * r(m[0][1]) + r(self.translation[0]),
            &p.x * r(m[1][0]) + &p.y * r(m[1][1]) + r(self.translation[1]),
        )
    }
}

/// Image of a polygon; orientation is restored when the map reverses it.
pub fn apply_map(p: &Polygon, m: &UnimodularAffineMap) -> Polygon {
    let mut verts: Vec<Point> = p.vertices().iter().map(|v| m.apply_point(v)).collect();
    if m.det() < 0 {
        verts.reverse();
    }
    Polygon::from_ccw_unchecked(verts)
}

/// Denominator and scaled integral vertices of a polygon.
pub(crate) fn to_grid(p: &Polygon) -> (BigInt, Vec<Pt<BigInt>>) {
    let k = p.denominator();
    let v = p.scaled(&k).expect("denominator clears all coordinates");
    (k, v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeStats {
    /// interior lattice points
    pub i: u64,
    /// boundary lattice points
    pub b: u64,
    /// denominator
    pub k: BigInt,
    pub area: Rational,
    /// `2k^2 area` at `k` = denominator
    pub area_k: BigInt,
    /// dimension of the integer hull, `-1` when empty
    pub hull_dim: i32,
}

fn to_u64(v: BigInt) -> u64 {
    v.to_u64().expect("count fits in u64")
}

pub fn lattice_stats(p: &Polygon) -> LatticeStats {
    let (k, v) = to_grid(p);
    let hull_dim = integer_hull_grid(&k, &v).dim();
    LatticeStats {
        i: to_u64(grid::interior_count(&k, &v)),
        b: to_u64(grid::boundary_count(&k, &v)),
        area: polygon_area(p),
        area_k: grid::twice_area(&v),
        k,
        hull_dim,
    }
}

fn integer_hull_grid(k: &BigInt, v: &[Pt<BigInt>]) -> Hull {
    convex_hull(
        grid::lattice_row_extremes(k, v)
            .into_iter()
            .map(|(x, y)| Point::new(Rational::from_integer(x), Rational::from_integer(y))),
    )
}

/// `conv(P ∩ Z^2)`.
pub fn integer_hull(p: &Polygon) -> Hull {
    let (k, v) = to_grid(p);
    integer_hull_grid(&k, &v)
}

/// Lattice points on the closed segment from `a` to `b`.
pub fn segment_lattice_count(a: &Point, b: &Point) -> u64 {
    let k = [&a.x, &a.y, &b.x, &b.y].iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let s = |p: &Point| {
        let kr = Rational::from_integer(k.clone());
        ((&p.x * &kr).to_integer(), (&p.y * &kr).to_integer())
    };
    let (sa, sb) = (s(a), s(b));
    if sa == sb {
        return u64::from(a.is_integral());
    }
    to_u64(grid::closed_segment_count(&k, &sa, &sb))
}

pub fn width(p: &Polygon, w: (i64, i64)) -> Result<Rational> {
    if w == (0, 0) {
        return Err(Error::Domain("width direction must be nonzero".into()));
    }
    let (k, v) = to_grid(p);
    let wb = (BigInt::from(w.0), BigInt::from(w.1));
    Ok(Rational::new(grid::width(&v, &wb), k))
}

/// Lattice width and the canonical minimizing direction.
pub fn lattice_width(p: &Polygon) -> (Rational, (i64, i64)) {
    let (k, v) = to_grid(p);
    let (w, d) = grid::lattice_width(&v);
    let dir = (d.0.to_i64().expect("small direction"), d.1.to_i64().expect("small direction"));
    (Rational::new(w, k), dir)
}

/// Distinguished representative of the unimodular equivalence class.
pub fn canonical_form(p: &Polygon) -> Polygon {
    let (k, v) = to_grid(p);
    Polygon::from_scaled(&k, &grid::canonical_key(&k, &v))
}

pub fn equivalent(p: &Polygon, q: &Polygon) -> bool {
    if p.len() != q.len() || p.denominator() != q.denominator() || polygon_area(p) != polygon_area(q) {
        return false;
    }
    let (k, v) = to_grid(p);
    let (_, w) = to_grid(q);
    grid::canonical_key(&k, &v) == grid::canonical_key(&k, &w)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StripProfile {
    /// integral heights whose horizontal line meets the interior
    pub n: u64,
    pub lengths: BTreeMap<Rational, Rational>,
    /// boundary lattice points on each integral line meeting the polygon
    pub boundary_counts: BTreeMap<i64, u64>,
    /// interior lattice points on each integral line meeting the polygon
    pub interior_counts: BTreeMap<i64, u64>,
}

/// Length of `P ∩ (R × {y})`, zero outside the vertical extent.
pub fn slice_length(p: &Polygon, y: &Rational) -> Rational {
    let (k, v) = to_grid(p);
    let scaled = y * Rational::from_integer(k.clone());
    let (lo, hi) = grid::y_range(&v);
    let (lo, hi) = (Rational::from_integer(lo), Rational::from_integer(hi));
    if scaled < lo || scaled > hi {
        return Rational::zero();
    }
    // evaluate at height scaled by the slice denominator to stay integral
    let d = scaled.denom().clone();
    let v2: Vec<Pt<BigInt>> = v.iter().map(|(x, y)| (x * &d, y * &d)).collect();
    let (l, r) = grid::row_span(&v2, scaled.numer());
    let left = Rational::new(l.n, l.d);
    let right = Rational::new(r.n, r.d);
    (right - left) / Rational::from_integer(k * d)
}

pub fn strip_profile(p: &Polygon, heights: &[Rational]) -> StripProfile {
    let (k, v) = to_grid(p);
    let (lo, hi) = grid::y_range(&v);
    let first = -((-lo.clone()).div_floor(&k));
    let last = hi.div_floor(&k);
    let mut n = 0;
    let mut boundary_counts = BTreeMap::new();
    let mut interior_counts = BTreeMap::new();
    let mut j = first;
    while j <= last {
        let y = &j * &k;
        let (l, r) = grid::row_span(&v, &y);
        let lat = |f: &grid::Frac<BigInt>| {
            let den = &f.d * &k;
            f.n.is_multiple_of(&den).then_some(())
        };
        let jj = j.to_i64().expect("row index fits");
        if y > lo && y < hi {
            n += 1;
            let lower = l.n.div_floor(&(&l.d * &k)) + 1;
            let upper = -((-&r.n).div_floor(&(&r.d * &k))) - 1;
            let inner = if upper >= lower { to_u64(upper - lower + 1) } else { 0 };
            interior_counts.insert(jj, inner);
            let on = u64::from(lat(&l).is_some()) + u64::from(lat(&r).is_some());
            boundary_counts.insert(jj, on);
        } else {
            // bottom or top line: every lattice point of the slice is on the boundary
            let lower = -((-&l.n).div_floor(&(&l.d * &k)));
            let upper = r.n.div_floor(&(&r.d * &k));
            let on = if upper >= lower { to_u64(upper - lower + 1) } else { 0 };
            boundary_counts.insert(jj, on);
            interior_counts.insert(jj, 0);
        }
        j += 1;
    }
    let lengths = heights.iter().map(|y| (y.clone(), slice_length(p, y))).collect();
    StripProfile { n, lengths, boundary_counts, interior_counts }
}

/// Whether `normalized_area` at the polygon's own denominator agrees with
/// the dilation identity `Area_k(P) = 2 i(kP) + b(kP) - 2`.
pub fn scaling_identity_holds(p: &Polygon) -> bool {
    let k = p.denominator();
    let Ok(ak) = normalized_area(p, &k) else { return false };
    let s = lattice_stats(&p.dilate(&k));
    ak == BigInt::from(2 * s.i + s.b) - BigInt::from(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn poly(pts: &[(i64, i64, i64, i64)]) -> Polygon {
        Polygon::hull_of(pts.iter().map(|&(a, b, c, d)| Point::frac(a, b, c, d))).unwrap()
    }

    fn ints(pts: &[(i64, i64)]) -> Polygon {
        Polygon::hull_of(pts.iter().map(|&(x, y)| Point::ints(x, y))).unwrap()
    }

    fn threefold() -> Polygon {
        ints(&[(0, 0), (3, 0), (0, 3)])
    }

    fn square() -> Polygon {
        ints(&[(0, 0), (1, 0), (1, 1), (0, 1)])
    }

    fn strip_triangle() -> Polygon {
        poly(&[(0, 1, 1, 2), (0, 1, -1, 1), (6, 1, -1, 1)])
    }

    #[test]
    fn stats_examples() {
        let s = lattice_stats(&threefold());
        assert_eq!((s.i, s.b), (1, 9));
        assert_eq!(s.area, rat(9, 2));
        let s = lattice_stats(&ints(&[(0, 0), (2, 0), (0, -2)]));
        assert_eq!((s.i, s.b), (0, 6));
        let s = lattice_stats(&poly(&[(0, 1, 1, 3), (0, 1, -1, 1), (8, 1, -1, 1)]));
        assert_eq!((s.i, s.b, s.k.clone()), (1, 11, 3.into()));
        assert_eq!(s.area_k, BigInt::from(96));
    }

    #[test]
    fn integer_hulls() {
        let h = integer_hull(&strip_triangle());
        let Hull::Poly(q) = h else { panic!("expected polygon") };
        assert_eq!(q, ints(&[(0, -1), (6, -1), (2, 0), (0, 0)]));
        let h = integer_hull(&poly(&[(0, 1, 1, 3), (0, 1, -1, 3), (2, 1, 0, 1)]));
        assert_eq!(h, Hull::Segment(Point::ints(0, 0), Point::ints(2, 0)));
        let h = integer_hull(&poly(&[(1, 4, 1, 4), (3, 4, 1, 4), (1, 2, 3, 4)]));
        assert_eq!(h, Hull::Empty);
    }

    #[test]
    fn segment_counts() {
        assert_eq!(segment_lattice_count(&Point::ints(0, 0), &Point::ints(6, 0)), 7);
        assert_eq!(segment_lattice_count(&Point::ints(0, 0), &Point::ints(4, 6)), 3);
        assert_eq!(segment_lattice_count(&Point::frac(0, 1, 1, 2), &Point::ints(6, -1)), 2);
    }

    #[test]
    fn widths() {
        assert_eq!(width(&square(), (0, 1)).unwrap(), int(1));
        assert_eq!(width(&strip_triangle(), (0, 1)).unwrap(), rat(3, 2));
        assert_eq!(width(&threefold(), (1, 1)).unwrap(), int(3));
        assert!(width(&square(), (0, 0)).is_err());
        assert_eq!(lattice_width(&square()), (int(1), (0, 1)));
        assert_eq!(lattice_width(&threefold()), (int(3), (0, 1)));
        assert_eq!(lattice_width(&strip_triangle()), (rat(3, 2), (0, 1)));
    }

    #[test]
    fn maps() {
        let p = square();
        assert_eq!(apply_map(&p, &UnimodularAffineMap::identity()), p);
        let moved = apply_map(&p, &UnimodularAffineMap::translation([5, -3]));
        assert_eq!(moved, ints(&[(5, -3), (6, -3), (6, -2), (5, -2)]));
        let shear = UnimodularAffineMap::linear([[1, 1], [0, 1]]).unwrap();
        let t = ints(&[(0, 0), (1, 0), (0, 1)]);
        assert_eq!(apply_map(&t, &shear), ints(&[(0, 0), (1, 0), (1, 1)]));
        assert!(UnimodularAffineMap::linear([[2, 0], [0, 1]]).is_err());
        let m = UnimodularAffineMap::new([[2, 1], [1, 1]], [3, -4]).unwrap();
        let r = UnimodularAffineMap::new([[0, 1], [1, 0]], [1, 1]).unwrap();
        let q = apply_map(&threefold(), &m.compose(&r));
        assert_eq!(q, apply_map(&apply_map(&threefold(), &r), &m));
        assert_eq!(apply_map(&q, &m.compose(&r).inverse()), threefold());
    }

    #[test]
    fn canonical_forms() {
        let a = ints(&[(0, 0), (1, 0), (0, 1)]);
        let b = ints(&[(5, 7), (6, 7), (6, 8)]);
        assert_eq!(canonical_form(&a), canonical_form(&b));
        let c = canonical_form(&strip_triangle());
        assert_eq!(canonical_form(&c), c);
        assert!(equivalent(&a, &b));
        assert!(!equivalent(&a, &ints(&[(0, 0), (2, 0), (0, 2)])));
        let shifted = apply_map(&threefold(), &UnimodularAffineMap::translation([3, 3]));
        assert!(equivalent(&threefold(), &shifted));
    }

    #[test]
    fn strip_profiles() {
        let s = strip_profile(&threefold(), &[]);
        assert_eq!(s.n, 2);
        let s = strip_profile(&strip_triangle(), &[int(0)]);
        assert_eq!(s.n, 1);
        assert_eq!(s.lengths[&int(0)], int(2));
        assert_eq!(s.interior_counts[&0], 1);
        assert_eq!(s.boundary_counts[&0], 2);
        assert_eq!(s.boundary_counts[&-1], 7);
        assert_eq!(strip_profile(&square(), &[]).n, 0);
        assert_eq!(slice_length(&strip_triangle(), &rat(-1, 2)), int(4));
        assert_eq!(slice_length(&strip_triangle(), &int(5)), int(0));
    }

    #[test]
    fn scaling_identity() {
        assert!(scaling_identity_holds(&strip_triangle()));
        assert!(scaling_identity_holds(&poly(&[(0, 1, 1, 3), (0, 1, -1, 1), (8, 1, -1, 1)])));
    }
}
