//! Integer kernel over scaled coordinates.
//!
//! A polygon of denominator dividing `k` is represented by the integral
//! vertices of `kP`; the lattice `Z^2` then becomes the sublattice `kZ^2`.
//! All routines are generic over the integer type so the public API can run
//! them on `BigInt` while the enumeration engine uses `i64`.

use std::fmt::Debug;
use std::hash::Hash;

use num::integer::{Integer, Roots};
use num::{FromPrimitive, Signed, ToPrimitive};

pub trait GridInt: Integer + Signed + Roots + Clone + Hash + Debug + FromPrimitive + ToPrimitive + Send + Sync {}

impl<T> GridInt for T where
    T: Integer + Signed + Roots + Clone + Hash + Debug + FromPrimitive + ToPrimitive + Send + Sync
{
}

pub type Pt<T> = (T, T);

/// `n / d` with `d > 0`.
#[derive(Clone, Debug)]
pub struct Frac<T> {
    pub n: T,
    pub d: T,
}

impl<T: GridInt> Frac<T> {
    fn new(n: T, d: T) -> Self {
        if d.is_negative() {
            Self { n: -n, d: -d }
        } else {
            Self { n, d }
        }
    }

    fn lt(&self, o: &Self) -> bool {
        self.n.clone() * o.d.clone() < o.n.clone() * self.d.clone()
    }
}

pub fn cross<T: GridInt>(a: &Pt<T>, b: &Pt<T>, p: &Pt<T>) -> T {
    (b.0.clone() - a.0.clone()) * (p.1.clone() - a.1.clone())
        - (b.1.clone() - a.1.clone()) * (p.0.clone() - a.0.clone())
}

/// Counterclockwise strictly convex hull vertices.
pub fn convex_hull<T: GridInt + Ord>(points: &[Pt<T>]) -> Vec<Pt<T>> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Pt<T>> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Pt<T>>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while hull.len() >= start + 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= T::zero() {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
    }
    hull
}

/// Twice the area of the scaled polygon, which is `Area_k` of the original.
pub fn twice_area<T: GridInt>(v: &[Pt<T>]) -> T {
    let n = v.len();
    (0..n).fold(T::zero(), |acc, j| {
        let (a, b) = (&v[j], &v[(j + 1) % n]);
        acc + a.0.clone() * b.1.clone() - a.1.clone() * b.0.clone()
    })
}

pub fn y_range<T: GridInt>(v: &[Pt<T>]) -> (T, T) {
    let lo = v.iter().map(|p| p.1.clone()).min().expect("nonempty");
    let hi = v.iter().map(|p| p.1.clone()).max().expect("nonempty");
    (lo, hi)
}

/// Left and right end of the slice at height `y`, which must lie within the
/// vertical range of the polygon.
pub fn row_span<T: GridInt>(v: &[Pt<T>], y: &T) -> (Frac<T>, Frac<T>) {
    let n = v.len();
    let mut lo: Option<Frac<T>> = None;
    let mut hi: Option<Frac<T>> = None;
    let mut push = |f: Frac<T>| {
        if lo.as_ref().is_none_or(|l| f.lt(l)) {
            lo = Some(f.clone());
        }
        if hi.as_ref().is_none_or(|h| h.lt(&f)) {
            hi = Some(f);
        }
    };
    for j in 0..n {
        let (a, b) = (&v[j], &v[(j + 1) % n]);
        if &a.1 == y {
            push(Frac::new(a.0.clone(), T::one()));
        }
        let below = a.1.clone().min(b.1.clone());
        let above = a.1.clone().max(b.1.clone());
        if a.1 != b.1 && &below < y && y < &above {
            let dy = b.1.clone() - a.1.clone();
            let num = a.0.clone() * dy.clone() + (y.clone() - a.1.clone()) * (b.0.clone() - a.0.clone());
            push(Frac::new(num, dy));
        }
    }
    (lo.expect("height inside polygon"), hi.expect("height inside polygon"))
}

fn ceil_div<T: GridInt>(a: T, b: T) -> T {
    -((-a).div_floor(&b))
}

/// Lattice rows `j` (the line `Y = kj`) meeting the closed polygon.
fn lattice_rows<T: GridInt>(k: &T, v: &[Pt<T>]) -> (T, T) {
    let (lo, hi) = y_range(v);
    (ceil_div(lo, k.clone()), hi.div_floor(k))
}

/// Number of points of `kZ^2` strictly inside.
pub fn interior_count<T: GridInt>(k: &T, v: &[Pt<T>]) -> T {
    let (lo, hi) = y_range(v);
    let mut j = lo.div_floor(k) + T::one();
    let mut count = T::zero();
    while j.clone() * k.clone() < hi {
        let (l, r) = row_span(v, &(j.clone() * k.clone()));
        let first = l.n.div_floor(&(l.d.clone() * k.clone())) + T::one();
        let last = ceil_div(r.n, r.d * k.clone()) - T::one();
        if last >= first {
            count = count + last - first + T::one();
        }
        j = j + T::one();
    }
    count
}

/// Points of `kZ^2` on the half-open segment `[a, b)`.
pub fn half_open_count<T: GridInt>(k: &T, a: &Pt<T>, b: &Pt<T>) -> T {
    let dx = b.0.clone() - a.0.clone();
    let dy = b.1.clone() - a.1.clone();
    let g = dx.gcd(&dy);
    if g.is_zero() {
        return T::zero();
    }
    let (sx, sy) = (dx / g.clone(), dy / g.clone());
    let e = sx.extended_gcd(&sy);
    let (u, w) = if e.gcd.is_negative() { (-e.x, -e.y) } else { (e.x, e.y) };
    let s0 = (-(u * a.0.clone() + w * a.1.clone())).mod_floor(k);
    let hits = |s: &T| {
        (a.0.clone() + s.clone() * sx.clone()).mod_floor(k).is_zero()
            && (a.1.clone() + s.clone() * sy.clone()).mod_floor(k).is_zero()
    };
    if !hits(&s0) || s0 >= g {
        return T::zero();
    }
    (g - T::one() - s0) / k.clone() + T::one()
}

pub fn boundary_count<T: GridInt>(k: &T, v: &[Pt<T>]) -> T {
    let n = v.len();
    (0..n).fold(T::zero(), |acc, j| acc + half_open_count(k, &v[j], &v[(j + 1) % n]))
}

/// Lattice points on the closed segment, in lattice units.
pub fn closed_segment_count<T: GridInt>(k: &T, a: &Pt<T>, b: &Pt<T>) -> T {
    let end =
        if b.0.clone().mod_floor(k).is_zero() && b.1.clone().mod_floor(k).is_zero() { T::one() } else { T::zero() };
    half_open_count(k, a, b) + end
}

/// Leftmost and rightmost lattice point of every lattice row, in lattice
/// units. Their hull is the integer hull.
pub fn lattice_row_extremes<T: GridInt>(k: &T, v: &[Pt<T>]) -> Vec<Pt<T>> {
    let (lo, hi) = lattice_rows(k, v);
    let mut out = Vec::new();
    let mut j = lo;
    while j <= hi {
        let (l, r) = row_span(v, &(j.clone() * k.clone()));
        let first = ceil_div(l.n, l.d * k.clone());
        let last = r.n.div_floor(&(r.d * k.clone()));
        if first <= last {
            out.push((first.clone(), j.clone()));
            if last != first {
                out.push((last, j.clone()));
            }
        }
        j = j + T::one();
    }
    out
}

pub fn width<T: GridInt>(v: &[Pt<T>], w: &Pt<T>) -> T {
    let vals = v.iter().map(|p| w.0.clone() * p.0.clone() + w.1.clone() * p.1.clone());
    let (mut lo, mut hi): (Option<T>, Option<T>) = (None, None);
    for x in vals {
        lo = Some(lo.map_or(x.clone(), |l| l.min(x.clone())));
        hi = Some(hi.map_or(x.clone(), |h| h.max(x)));
    }
    hi.expect("nonempty") - lo.expect("nonempty")
}

/// Minimal width over primitive integer directions, with the
/// lexicographically smallest minimizing direction whose first nonzero
/// entry is positive.
///
/// The width function is a norm bounded below by `omega * |w|`, where
/// `omega` is the Euclidean minimal width, attained perpendicular to some
/// edge. Any direction beating the incumbent `f0` has
/// `|w|^2 <= f0^2 |e|^2 / h_e^2`, which bounds the search disc.
pub fn lattice_width<T: GridInt>(v: &[Pt<T>]) -> (T, Pt<T>) {
    let zero = T::zero();
    let one = T::one();
    let seeds = [
        (zero.clone(), one.clone()),
        (one.clone(), -one.clone()),
        (one.clone(), zero.clone()),
        (one.clone(), one.clone()),
    ];
    let f0 = seeds.iter().map(|w| width(v, w)).min().expect("seeds");
    let n = v.len();
    // minimize h_e^2 / |e|^2 by cross multiplication
    let mut best: Option<(T, T)> = None;
    for j in 0..n {
        let (a, b) = (&v[j], &v[(j + 1) % n]);
        let h = v.iter().map(|p| cross(a, b, p)).max().expect("nonempty");
        let ex = b.0.clone() - a.0.clone();
        let ey = b.1.clone() - a.1.clone();
        let len2 = ex.clone() * ex + ey.clone() * ey;
        let h2 = h.clone() * h;
        best = match best {
            Some((bh, bl)) if bh.clone() * len2.clone() <= h2.clone() * bl.clone() => Some((bh, bl)),
            _ => Some((h2, len2)),
        };
    }
    let (h2, len2) = best.expect("edges");
    let radius2 = (f0.clone() * f0.clone() * len2).div_floor(&h2);
    let mut win: (T, Pt<T>) = (f0.clone() + one, (zero, T::one()));
    for_directions_in_disc(&radius2, |w| {
        let f = width(v, &w);
        if f < win.0 || (f == win.0 && w < win.1) {
            win = (f, w);
        }
    });
    win
}

/// Every primitive direction (first nonzero entry positive) whose width is
/// at most `bound`, by the same disc argument as [`lattice_width`].
pub fn directions_within<T: GridInt>(v: &[Pt<T>], bound: &T) -> Vec<(T, Pt<T>)> {
    let n = v.len();
    let mut best: Option<(T, T)> = None;
    for j in 0..n {
        let (a, b) = (&v[j], &v[(j + 1) % n]);
        let h = v.iter().map(|p| cross(a, b, p)).max().expect("nonempty");
        let ex = b.0.clone() - a.0.clone();
        let ey = b.1.clone() - a.1.clone();
        let len2 = ex.clone() * ex + ey.clone() * ey;
        let h2 = h.clone() * h;
        best = match best {
            Some((bh, bl)) if bh.clone() * len2.clone() <= h2.clone() * bl.clone() => Some((bh, bl)),
            _ => Some((h2, len2)),
        };
    }
    let (h2, len2) = best.expect("edges");
    let radius2 = (bound.clone() * bound.clone() * len2).div_floor(&h2);
    let mut out = Vec::new();
    for_directions_in_disc(&radius2, |w| {
        let f = width(v, &w);
        if f <= *bound {
            out.push((f, w));
        }
    });
    out
}

fn for_directions_in_disc<T: GridInt>(radius2: &T, mut visit: impl FnMut(Pt<T>)) {
    let r = radius2.sqrt();
    let mut a = T::zero();
    while a <= r {
        let mut b = -r.clone();
        while b <= r {
            if (a.is_positive() || b.is_positive())
                && a.clone() * a.clone() + b.clone() * b.clone() <= *radius2
                && a.gcd(&b).is_one()
            {
                visit((a.clone(), b.clone()));
            }
            b = b + T::one();
        }
        a = a + T::one();
    }
}

/// `k / gcd(k, all coordinates)`: the denominator of the unscaled polygon.
pub fn denominator<T: GridInt>(k: &T, v: &[Pt<T>]) -> T {
    let g = v.iter().fold(k.clone(), |g, p| g.gcd(&p.0).gcd(&p.1));
    k.clone() / g
}

/// Normal form under `GL_2(Z)` acting linearly and `kZ^2` acting by
/// translation.
///
/// For every vertex and both orientations there is exactly one map sending
/// the outgoing edge to the positive x-axis, the incoming edge into the
/// window `0 <= dx < -dy`, and the vertex into `[0,k)^2`. The normal form is
/// the lexicographically smallest vertex sequence read from that anchor.
pub fn canonical_key<T: GridInt>(k: &T, v: &[Pt<T>]) -> Vec<Pt<T>> {
    let n = v.len();
    let reflected: Vec<Pt<T>> = v.iter().rev().map(|p| (-p.0.clone(), p.1.clone())).collect();
    let mut best: Option<Vec<Pt<T>>> = None;
    for poly in [v, &reflected[..]] {
        for j in 0..n {
            let cand = anchored_image(k, poly, j);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.expect("nonempty polygon")
}

fn anchored_image<T: GridInt>(k: &T, v: &[Pt<T>], j: usize) -> Vec<Pt<T>> {
    let n = v.len();
    let cur = &v[j];
    let next = &v[(j + 1) % n];
    let prev = &v[(j + n - 1) % n];
    let dx = next.0.clone() - cur.0.clone();
    let dy = next.1.clone() - cur.1.clone();
    let g = dx.gcd(&dy);
    let (ux, uy) = (dx / g.clone(), dy / g);
    let e = ux.extended_gcd(&uy);
    let (p, q) = if e.gcd.is_negative() { (-e.x, -e.y) } else { (e.x, e.y) };
    // rows (p, q) and (-uy, ux): sends u to (1, 0) with determinant 1
    let lin = |x: &T, y: &T| {
        (p.clone() * x.clone() + q.clone() * y.clone(), -uy.clone() * x.clone() + ux.clone() * y.clone())
    };
    let (ix, iy) = lin(&(cur.0.clone() - prev.0.clone()), &(cur.1.clone() - prev.1.clone()));
    debug_assert!(iy.is_negative());
    let depth = -iy;
    let t = ix.div_floor(&depth);
    // shear x -> x + t*y maps the incoming edge to (ix - t*depth, iy)
    let (ax, ay) = lin(&cur.0, &cur.1);
    let ax = ax + t.clone() * ay.clone();
    let ox = ax.clone() - ax.mod_floor(k);
    let oy = ay.clone() - ay.mod_floor(k);
    (0..n)
        .map(|s| {
            let w = &v[(j + s) % n];
            let (x, y) = lin(&w.0, &w.1);
            (x + t.clone() * y.clone() - ox.clone(), y - oy.clone())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let pts = [(0i64, 0), (2, 0), (1, 0), (1, 1), (2, 2), (0, 2), (0, 1), (2, 2)];
        assert_eq!(convex_hull(&pts), vec![(0, 0), (2, 0), (2, 2), (0, 2)]);
        assert_eq!(convex_hull(&[(0i64, 0), (3, 3), (1, 1)]), vec![(0, 0), (3, 3)]);
    }

    fn tri() -> Vec<Pt<i64>> {
        vec![(0, 0), (3, 0), (0, 3)]
    }

    #[test]
    fn counts_on_lattice_triangle() {
        assert_eq!(interior_count(&1, &tri()), 1);
        assert_eq!(boundary_count(&1, &tri()), 9);
        assert_eq!(twice_area(&tri()), 9);
    }

    #[test]
    fn counts_on_scaled_triangle() {
        // conv((0,1/3),(0,-1),(8,-1)) scaled by 3
        let v = vec![(0, -3), (24, -3), (0, 1)];
        assert_eq!(interior_count(&3, &v), 1);
        assert_eq!(boundary_count(&3, &v), 11);
    }

    #[test]
    fn segment_counts() {
        assert_eq!(closed_segment_count(&1, &(0, 0), &(6, 0)), 7);
        assert_eq!(closed_segment_count(&1, &(0, 0), &(4, 6)), 3);
        // (0,1/2) to (6,-1), scaled by 2
        assert_eq!(closed_segment_count(&2, &(0, 1), &(12, -2)), 2);
    }

    #[test]
    fn lattice_width_of_triangle_and_square() {
        assert_eq!(lattice_width(&tri()), (3, (0, 1)));
        assert_eq!(lattice_width(&[(0, 0), (1, 0), (1, 1), (0, 1)]), (1, (0, 1)));
        // a sheared thin polygon: width 1 in direction (1,-5), not along an axis
        let v = vec![(0, 0), (1, 0), (11, 2), (10, 2)];
        assert_eq!(lattice_width(&v), (1, (1, -5)));
    }

    #[test]
    fn canonical_key_is_invariant() {
        let v: Vec<Pt<i64>> = vec![(0, -3), (24, -3), (0, 1)];
        let key = canonical_key(&3, &v);
        // apply x -> 2x + y, y -> x + y (det 1) and translate by (3, -6)
        let moved: Vec<Pt<i64>> = v.iter().map(|&(x, y)| (2 * x + y + 3, x + y - 6)).collect();
        assert_eq!(canonical_key(&3, &moved), key);
        // reflection reverses orientation
        let refl: Vec<Pt<i64>> = v.iter().rev().map(|&(x, y)| (y, x)).collect();
        assert_eq!(canonical_key(&3, &refl), key);
        // translation by a non-lattice vector changes the class
        let shifted: Vec<Pt<i64>> = v.iter().map(|&(x, y)| (x + 1, y)).collect();
        assert_ne!(canonical_key(&3, &shifted), key);
    }

    #[test]
    fn denominators() {
        assert_eq!(denominator(&4, &[(0, 0), (2, 0), (0, 2)]), 2);
        assert_eq!(denominator(&3, &[(0, 0), (3, 0), (0, 3)]), 1);
    }
}
