#![allow(dead_code)]

use latpoly::exact::{Point, Polygon};
use latpoly::lattice::UnimodularAffineMap;
use rand::rngs::StdRng;
use rand::Rng;

/// Random two-dimensional polygon with vertices in `(1/k)Z^2`, coordinates
/// within `[-reach, reach]`.
pub fn random_polygon(rng: &mut StdRng, k: i64, reach: i64) -> Polygon {
    loop {
        let n = rng.gen_range(3..=7);
        let pts: Vec<Point> = (0..n)
            .map(|_| {
                let x = rng.gen_range(-reach * k..=reach * k);
                let y = rng.gen_range(-reach * k..=reach * k);
                Point::frac(x, k, y, k)
            })
            .collect();
        if let Ok(p) = Polygon::hull_of(pts) {
            return p;
        }
    }
}

/// Product of elementary shears `(upper, s)`, an optional coordinate swap
/// and a translation.
pub fn map_from(shears: &[(bool, i64)], swap: bool, t: [i64; 2]) -> UnimodularAffineMap {
    let mut m = [[1i64, 0], [0, 1]];
    for &(upper, s) in shears {
        m = if upper {
            [[m[0][0], m[0][0] * s + m[0][1]], [m[1][0], m[1][0] * s + m[1][1]]]
        } else {
            [[m[0][0] + m[0][1] * s, m[0][1]], [m[1][0] + m[1][1] * s, m[1][1]]]
        };
    }
    if swap {
        m = [[m[0][1], m[0][0]], [m[1][1], m[1][0]]];
    }
    UnimodularAffineMap::new(m, t).expect("product of unimodular matrices")
}

pub fn random_map(rng: &mut StdRng) -> UnimodularAffineMap {
    let shears: Vec<(bool, i64)> =
        (0..rng.gen_range(1..=4)).map(|_| (rng.gen_bool(0.5), rng.gen_range(-2..=2))).collect();
    map_from(&shears, rng.gen_bool(0.5), [rng.gen_range(-5..=5), rng.gen_range(-5..=5)])
}
