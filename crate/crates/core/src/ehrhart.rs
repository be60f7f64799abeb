//! Ehrhart counts, quasipolynomials and half-integral boundary refinements.

use std::collections::HashSet;

use num::{BigInt, Integer, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, parse_rational, rat, Point, Polygon, Rational};
use crate::extremal::{area_minimizers, intermediate_polygon, maximizer_families, HullDim};
use crate::grid;
use crate::lattice::{lattice_stats, to_grid};

/// `|tP ∩ Z^2|`.
pub fn ehrhart_count(p: &Polygon, t: u64) -> u64 {
    let (k, v) = to_grid(p);
    let tb = BigInt::from(t);
    let v: Vec<_> = v.into_iter().map(|(x, y)| (x * &tb, y * &tb)).collect();
    let n = grid::interior_count(&k, &v) + grid::boundary_count(&k, &v);
    n.to_u64().expect("count fits in u64")
}

/// `|∂P ∩ (1/m)Z^2|`, the boundary count of `mP`.
pub fn refined_boundary_count(p: &Polygon, m: u64) -> u64 {
    let (k, v) = to_grid(p);
    let mb = BigInt::from(m);
    let v: Vec<_> = v.into_iter().map(|(x, y)| (x * &mb, y * &mb)).collect();
    grid::boundary_count(&k, &v).to_u64().expect("count fits in u64")
}

/// `leading t^2 + c1(t) t + c2(t)` with `c1, c2` periodic; index `r - 1`
/// holds the residue `r`, where residue `period` stands for `t ≡ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QuasiJson", into = "QuasiJson")]
pub struct QuasiPolynomial {
    pub period: u64,
    pub leading: Rational,
    pub c1: Vec<Rational>,
    pub c2: Vec<Rational>,
}

impl QuasiPolynomial {
    fn residue(&self, t: u64) -> usize {
        let r = t % self.period;
        (if r == 0 { self.period } else { r }) as usize - 1
    }

    pub fn c1_at(&self, t: u64) -> &Rational {
        &self.c1[self.residue(t)]
    }

    pub fn c2_at(&self, t: u64) -> &Rational {
        &self.c2[self.residue(t)]
    }

    pub fn evaluate(&self, t: u64) -> Rational {
        let tt = int(t as i64);
        &self.leading * &tt * &tt + self.c1_at(t) * &tt + self.c2_at(t)
    }
}

#[derive(Serialize, Deserialize)]
struct QuasiJson {
    period: u64,
    leading: String,
    c1: Vec<String>,
    c2: Vec<String>,
}

impl From<QuasiPolynomial> for QuasiJson {
    fn from(q: QuasiPolynomial) -> Self {
        Self {
            period: q.period,
            leading: fmt_rational(&q.leading),
            c1: q.c1.iter().map(fmt_rational).collect(),
            c2: q.c2.iter().map(fmt_rational).collect(),
        }
    }
}

impl TryFrom<QuasiJson> for QuasiPolynomial {
    type Error = Error;

    fn try_from(j: QuasiJson) -> Result<Self> {
        let parse = |v: &[String]| v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>();
        let q = QuasiPolynomial {
            period: j.period,
            leading: parse_rational(&j.leading)?,
            c1: parse(&j.c1)?,
            c2: parse(&j.c2)?,
        };
        if q.period == 0 || q.c1.len() as u64 != q.period || q.c2.len() as u64 != q.period {
            return Err(Error::Parse("coefficient lists must have one entry per residue".into()));
        }
        Ok(q)
    }
}

/// Interpolates from the counts at `t = r, r+k, r+2k` for each residue and
/// checks the prediction up to `t = 4k`.
pub fn quasipolynomial(p: &Polygon) -> QuasiPolynomial {
    let k = p.denominator().to_u64().expect("denominator fits in u64");
    let e = |t: u64| int(ehrhart_count(p, t) as i64);
    let kr = int(k as i64);
    let mut leading = None;
    let (mut c1, mut c2) = (Vec::new(), Vec::new());
    for r in 1..=k {
        let (e0, e1, e2) = (e(r), e(r + k), e(r + 2 * k));
        let l = (&e2 - &e1 * int(2) + &e0) / (&kr * &kr * int(2));
        let rr = int(r as i64);
        let a1 = (&e1 - &e0) / &kr - &l * (&rr * int(2) + &kr);
        let a2 = &e0 - &l * &rr * &rr - &a1 * &rr;
        match &leading {
            None => leading = Some(l),
            Some(prev) => assert_eq!(prev, &l, "leading coefficient differs between residues"),
        }
        c1.push(a1);
        c2.push(a2);
    }
    let q = QuasiPolynomial { period: k, leading: leading.expect("period >= 1"), c1, c2 };
    for t in 1..=4 * k {
        assert_eq!(q.evaluate(t), e(t), "quasipolynomial prediction at t = {t}");
    }
    assert_eq!(q.leading, p.area(), "leading coefficient is the area");
    q
}

/// Parameters of the half-integral boundary bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct B2PBoundInput {
    pub i: u64,
    pub b: u64,
    /// `Area_2`
    pub a: u64,
    /// parity of `a`
    pub r: u64,
}

impl B2PBoundInput {
    pub fn new(i: u64, b: u64, a: u64) -> Result<Self> {
        if i < 2 || b < 3 {
            return Err(Error::Domain(format!("the bound needs i >= 2 and b >= 3, got ({i},{b})")));
        }
        Ok(Self { i, b, a, r: a % 2 })
    }

    fn exceptional(&self) -> bool {
        self.a == 12 * self.i + 2 * self.b + 8 && self.b != 2 * self.i + 4
    }
}

pub fn b2p_lower_bound(input: &B2PBoundInput) -> u64 {
    2 * input.b + input.r + if input.exceptional() { 2 } else { 0 }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct B2PWitness {
    #[serde(serialize_with = "crate::io::serialize_polygon")]
    pub polygon: Polygon,
    pub template: String,
    /// solved x-coordinate of the `(·,-1/2)` vertex for the main template
    pub offset: Option<String>,
    /// the offset printed with the template, kept for comparison
    pub printed_offset: Option<String>,
}

fn witness_ok(p: &Polygon, input: &B2PBoundInput) -> bool {
    let s = lattice_stats(p);
    s.k == BigInt::from(2)
        && s.i == input.i
        && s.b == input.b
        && s.area_k == BigInt::from(input.a)
        && refined_boundary_count(p, 2) == b2p_lower_bound(input)
}

/// A denominator-two polygon attaining the bound at `(i, b, A)`.
pub fn b2p_witness(i: u64, b: u64, a: u64) -> Result<B2PWitness> {
    let input = B2PBoundInput::new(i, b, a)?;
    let (ii, bb, aa) = (i as i64, b as i64, a as i64);
    let unreachable = || Error::UnreachableArea {
        target: a.to_string(),
        min: (6 * i + 4 * b - 6).to_string(),
        max: "12i+2b+8".into(),
    };
    if aa < 6 * ii + 4 * bb - 6 {
        return Err(unreachable());
    }
    let found = |p: Polygon, template: &str, offset: Option<String>, printed: Option<String>| {
        witness_ok(&p, &input).then(|| B2PWitness {
            polygon: p,
            template: template.to_string(),
            offset,
            printed_offset: printed,
        })
    };
    let r = input.r as i64;
    let a_tilde = 12 * ii + 2 * bb - 7 - aa;
    let printed = rat(2 * ii + 2, 1) - rat(a_tilde.div_euclid(2), 2);
    // main template, offset solved over (1/2)Z
    for q2 in 0..=(4 * (4 * ii + bb + 8)) {
        let q = rat(q2, 2);
        let pts = vec![
            Point::frac(0, 1, 1, 2),
            Point::frac(0, 1, -1, 1),
            Point::frac(2 * (bb - 3) + r, 2, -1, 1),
            Point::new(q.clone(), rat(-1, 2)),
            Point::frac(ii + 1, 1, 0, 1),
        ];
        let Ok(p) = Polygon::hull_of(pts) else { continue };
        if let Some(w) = found(p, "main", Some(fmt_rational(&q)), Some(fmt_rational(&printed))) {
            return Ok(w);
        }
    }
    if aa == 6 * ii + 4 * bb - 5 {
        let pts = vec![
            Point::frac(0, 1, 1, 2),
            Point::frac(1, 2, 1, 2),
            Point::frac(ii + 1, 1, 0, 1),
            Point::frac(bb - 3, 1, -1, 1),
            Point::frac(0, 1, -1, 1),
        ];
        if let Some(w) = Polygon::hull_of(pts).ok().and_then(|p| found(p, "second-top-vertex", None, None)) {
            return Ok(w);
        }
    }
    if aa == 12 * ii + 2 * bb + 8 {
        if b == 2 * i + 4 {
            let pts = vec![Point::frac(-1, 2, -1, 1), Point::frac(4 * ii + 3, 2, -1, 1), Point::frac(1, 2, 1, 1)];
            if let Some(w) = Polygon::hull_of(pts).ok().and_then(|p| found(p, "triangle", None, None)) {
                return Ok(w);
            }
        }
        for (id, p) in maximizer_families(2, i, b).unwrap_or_default() {
            if let Some(w) = found(p, &id.to_string(), None, None) {
                return Ok(w);
            }
        }
    }
    // remaining sources: minimizers and the intermediate-area search
    if let Ok(ms) = area_minimizers(2, i, b, HullDim::Two) {
        for m in ms {
            if let Some(w) = found(m.polygon, &m.id.to_string(), None, None) {
                return Ok(w);
            }
        }
    }
    if let Ok(p) = intermediate_polygon(2, i, b, &BigInt::from(a)) {
        if let Some(w) = found(p, "intermediate", None, None) {
            return Ok(w);
        }
    }
    Err(unreachable())
}

/// Predicted number of quasipolynomials for `i >= 2`, `b >= 3`.
pub fn conjecture_value(i: u64) -> Result<u64> {
    if i < 2 {
        return Err(Error::Domain("the conjecture concerns i >= 2".into()));
    }
    let twice = 9 * i.pow(3) + 72 * i.pow(2) + 175 * i + 106;
    assert!(twice.is_even(), "conjecture value is integral");
    Ok(twice / 2)
}

/// `(i, b, Area_2, b(2P))`, which determines the quasipolynomial of a
/// denominator-two polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuasiKey {
    pub i: u64,
    pub b: u64,
    pub area_2: u64,
    pub b2p: u64,
}

pub fn quasi_key(p: &Polygon) -> Result<QuasiKey> {
    let s = lattice_stats(p);
    if s.k > BigInt::from(2) {
        return Err(Error::Domain(format!("denominator {} is not half-integral", s.k)));
    }
    let area_2 = (p.area() * int(8)).to_integer().to_u64().expect("area fits in u64");
    Ok(QuasiKey { i: s.i, b: s.b, area_2, b2p: refined_boundary_count(p, 2) })
}

/// Distinct quasipolynomials among denominator-two polygons with `i`
/// interior and at least 3 boundary points.
pub fn count_distinct_quasipolynomials(i: u64, polygons: impl IntoIterator<Item = Polygon>) -> Result<usize> {
    let mut keys = HashSet::new();
    for p in polygons {
        let key = quasi_key(&p)?;
        if key.i != i || key.b < 3 || p.denominator() != BigInt::from(2) {
            return Err(Error::Domain(format!("polygon {p:?} is outside the counted family")));
        }
        keys.insert(key);
    }
    Ok(keys.len())
}
