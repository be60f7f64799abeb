//! Verification harness: replays each bound and its equality
//! classification over complete enumerations.
//!
//! A [`Census`] is one enumeration run; the `check_*` functions are pure
//! analyses of a census, so one run can feed several reports.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use num::{BigInt, Integer, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::ehrhart::{b2p_lower_bound, b2p_witness, conjecture_value, count_distinct_quasipolynomials, B2PBoundInput};
use crate::enumerate::{enumerate_with, Enumeration, EnumerationBox, EnumerationConfig, PolygonClass};
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, rat, Point, Polygon, Rational};
use crate::extremal::{
    area_minimizers, b_max, half_integral_max_area, lattice_width_cap, max_area_is_conjectural, max_area_normalized,
    maximizer_families, min_area, scott_maximizer, unit_strip_equality_check, FamilyId, FamilyKind, HullDim,
};
use crate::grid::{self, Pt};
use crate::lattice::{apply_map, lattice_stats, UnimodularAffineMap};

pub const UNLISTED: &str = "UNLISTED";

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    #[serde(serialize_with = "crate::io::serialize_polygon")]
    pub polygon: Polygon,
    pub check: String,
    pub observed: String,
    pub expected: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EqualityClass {
    #[serde(serialize_with = "crate::io::serialize_polygon")]
    pub polygon: Polygon,
    pub b: u64,
    /// matching family member, or [`UNLISTED`]
    pub family: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub task: String,
    pub parameters: Value,
    pub polygons_examined: u64,
    pub violations: Vec<Violation>,
    pub equality_classes: Vec<EqualityClass>,
    /// task-specific tables
    pub details: Value,
    pub elapsed_ms: u64,
    pub complete: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// 0 pass, 1 violations, 2 incomplete.
    pub fn exit_code(&self) -> i32 {
        if !self.violations.is_empty() {
            1
        } else if !self.complete {
            2
        } else {
            0
        }
    }

    pub fn unlisted(&self) -> usize {
        self.equality_classes.iter().filter(|e| e.family == UNLISTED).count()
    }
}

/// One enumeration run and its box.
#[derive(Clone, Debug)]
pub struct Census {
    pub bx: EnumerationBox,
    pub enumeration: Enumeration,
    pub elapsed_ms: u64,
}

impl Census {
    pub fn run(bx: EnumerationBox, cfg: &EnumerationConfig) -> Result<Self> {
        let start = Instant::now();
        let enumeration = enumerate_with(&bx, cfg)?;
        Ok(Self { bx, enumeration, elapsed_ms: start.elapsed().as_millis() as u64 })
    }

    pub fn classes(&self) -> &[PolygonClass] {
        &self.enumeration.classes
    }

    pub fn complete(&self) -> bool {
        self.enumeration.complete
    }

    /// The denominator-`k` classes of a census run without the exact
    /// filter; the same as rerunning with it, since the filter only acts on
    /// accepted polygons.
    pub fn exact_part(&self) -> Census {
        let mut out = self.clone();
        out.bx.exact_denominator = true;
        out.enumeration.classes.retain(|c| c.denominator() == self.bx.k);
        out
    }

    /// The class of `p`, if the enumeration found it.
    pub fn find(&self, p: &Polygon) -> Option<&PolygonClass> {
        let c = PolygonClass::from_polygon(self.bx.k, p)?;
        self.classes().binary_search_by(|x| x.key.cmp(&c.key)).ok().map(|j| &self.classes()[j])
    }

    fn expect(&self, k: u64, i: u64) -> Result<()> {
        self.expect_with(k, i, true)
    }

    /// `exact`: whether the census must hold only denominator-`k` classes
    /// or every denominator dividing `k`.
    fn expect_with(&self, k: u64, i: u64, exact: bool) -> Result<()> {
        if self.bx.k != k as i64 || self.bx.i_target != i {
            return Err(Error::Domain(format!(
                "census is for (k,i) = ({},{}), not ({k},{i})",
                self.bx.k, self.bx.i_target
            )));
        }
        if self.bx.exact_denominator != exact {
            let want = if exact { "exactly k" } else { "every divisor of k" };
            return Err(Error::Domain(format!("this check needs a census with denominator {want}")));
        }
        Ok(())
    }

    fn report(&self, task: &str, parameters: Value, acc: Acc) -> VerificationReport {
        let mut details = acc.details;
        details.insert("nodes".into(), json!(self.enumeration.nodes));
        details.insert("box".into(), serde_json::to_value(&self.bx).expect("box serializes"));
        VerificationReport {
            task: task.to_string(),
            parameters,
            polygons_examined: self.classes().len() as u64,
            violations: acc.violations,
            equality_classes: acc.equality,
            details: Value::Object(details),
            elapsed_ms: self.elapsed_ms,
            complete: self.complete(),
        }
    }
}

#[derive(Default)]
struct Acc {
    violations: Vec<Violation>,
    equality: Vec<EqualityClass>,
    details: Map<String, Value>,
}

impl Acc {
    fn violate(&mut self, p: Polygon, check: &str, observed: impl ToString, expected: impl ToString) {
        self.violations.push(Violation {
            polygon: p,
            check: check.to_string(),
            observed: observed.to_string(),
            expected: expected.to_string(),
        });
    }

    fn detail(&mut self, key: &str, v: Value) {
        self.details.insert(key.to_string(), v);
    }

    /// Matches the equality classes against the family list in both
    /// directions. Unmatched classes are violations when `strict`.
    fn match_families(
        &mut self,
        census: &Census,
        b: u64,
        found: &[&PolygonClass],
        families: &[(FamilyId, Polygon)],
        strict: bool,
    ) {
        let mut by_key: HashMap<Vec<Pt<i64>>, &FamilyId> = HashMap::new();
        for (id, p) in families {
            match PolygonClass::from_polygon(census.bx.k, p) {
                Some(c) => {
                    by_key.entry(c.key).or_insert(id);
                }
                None => self.violate(p.clone(), "family member off the grid", id, "on the grid"),
            }
        }
        for c in found {
            let family = by_key.get(&c.key).map_or(UNLISTED.to_string(), |id| id.to_string());
            if strict && family == UNLISTED {
                self.violate(c.polygon(), "equality class not in the family list", UNLISTED, "a listed family");
            }
            self.equality.push(EqualityClass { polygon: c.polygon(), b, family });
        }
        if census.complete() {
            for (id, p) in families {
                if census.find(p).is_none() {
                    self.violate(p.clone(), "family member missing from the enumeration", id, "found");
                }
            }
        }
    }
}

/// Horizontal extent `(k+1)(i+1)+2` in grid units.
pub fn horizontal_extent(k: u64, i: u64) -> i64 {
    (k * ((k + 1) * (i + 1) + 2)) as i64
}

/// Box holding every class with denominator `k` and `i` interior points.
pub fn certified_box(k: u64, i: u64) -> Result<EnumerationBox> {
    let cap = lattice_width_cap(k, i)?;
    let x = (k + 1) * (i + 1) + 2;
    Ok(EnumerationBox::lattice_width(
        k as i64,
        i,
        cap as i64,
        horizontal_extent(k, i),
        format!(
            "lattice width <= {cap}/{k}: lw^2 <= 8/3 area with the area bound for polygons outside R x [-1,1] \
             (lw <= 2 inside); horizontal extent {x} = (k+1)(i+1)+2 by the convexity argument behind b_max"
        ),
    ))
}

/// The `k = 2` certified box keeping lattice classes too. Lattice polygons
/// with `i` interior points have area at most `max(9/2, 2i+2)`, so their
/// width stays within the denominator-2 cap.
pub fn half_integral_box(i: u64) -> Result<EnumerationBox> {
    let mut bx = certified_box(2, i)?;
    bx.exact_denominator = false;
    bx.derivation.push_str("; denominators 1 and 2 kept");
    Ok(bx)
}

/// `R × [-1, 1/k]`, keeping only classes at or above the upper bound.
pub fn upper_strip_box(k: u64, i: u64) -> Result<EnumerationBox> {
    let bm = b_max(k, i)?;
    let floor = (0..=bm)
        .map(|b| {
            max_area_normalized(k, i, b)?.to_i64().ok_or_else(|| Error::Domain("bound exceeds the i64 kernel".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut bx = EnumerationBox::thin_strip(
        k as i64,
        i,
        horizontal_extent(k, i),
        "R x [-1,1/k], where the upper bound holds for every polygon; horizontal extent (k+1)(i+1)+2; \
         classes below the bound are discarded",
    );
    bx.area_floor = Some(floor);
    Ok(bx)
}

fn by_b(census: &Census) -> BTreeMap<u64, Vec<&PolygonClass>> {
    let mut m: BTreeMap<u64, Vec<&PolygonClass>> = BTreeMap::new();
    for c in census.classes() {
        m.entry(c.b).or_default().push(c);
    }
    m
}

fn histogram(census: &Census) -> Value {
    let m: BTreeMap<String, usize> = by_b(census).into_iter().map(|(b, v)| (b.to_string(), v.len())).collect();
    json!(m)
}

fn normalized(k: u64, a: &Rational) -> i64 {
    (a * int(2 * (k * k) as i64)).to_integer().to_i64().expect("normalized area fits in i64")
}

/// `b <= b_max` and equality only for the Scott maximizer.
pub fn check_scott(k: u64, i: u64, census: &Census) -> Result<VerificationReport> {
    census.expect(k, i)?;
    let bm = b_max(k, i)?;
    let mut acc = Acc::default();
    let groups = by_b(census);
    for (&b, cs) in groups.range(bm + 1..) {
        for c in cs {
            acc.violate(c.polygon(), "b <= b_max", b, bm);
        }
    }
    let top: Vec<&PolygonClass> = groups.get(&bm).cloned().unwrap_or_default();
    let family = vec![(FamilyId::new(FamilyKind::ScottMax, "tri", k, i, bm, None), scott_maximizer(k, i)?)];
    acc.match_families(census, bm, &top, &family, true);
    acc.detail("b_max", json!(bm));
    acc.detail("max_b_observed", json!(groups.keys().next_back()));
    acc.detail("classes_by_b", histogram(census));
    Ok(census.report("scott", json!({"k": k, "i": i}), acc))
}

/// Per-`b` minima against the lower bound for both integer hull cases.
pub fn check_area_lower(k: u64, i: u64, census: &Census) -> Result<VerificationReport> {
    census.expect(k, i)?;
    let bm = b_max(k, i)?;
    let mut acc = Acc::default();
    let mut table = Map::new();
    let mut uncovered = 0usize;
    for (b, cs) in by_b(census) {
        let bound = |dim| min_area(k, i, b, dim).ok().map(|a| normalized(k, &a));
        let (two, col) = (bound(HullDim::Two), bound(HullDim::Collinear));
        let threshold = two.into_iter().chain(col).max();
        let observed_min = cs.iter().map(|c| c.area_k).min();
        let mut minima: BTreeMap<&str, i64> = BTreeMap::new();
        let mut at_bound: BTreeMap<&str, Vec<&PolygonClass>> = BTreeMap::new();
        for c in &cs {
            // classes above every bound need no hull computation
            if threshold.is_none_or(|t| c.area_k > t) {
                if threshold.is_none() {
                    uncovered += 1;
                }
                continue;
            }
            let two_dim = lattice_stats(&c.polygon()).hull_dim == 2;
            let (name, bound) = if two_dim { ("two", two) } else { ("collinear", col) };
            let Some(bound) = bound else {
                uncovered += 1;
                continue;
            };
            let m = minima.entry(name).or_insert(c.area_k);
            *m = (*m).min(c.area_k);
            if c.area_k < bound {
                acc.violate(c.polygon(), &format!("area lower bound ({name} integer hull)"), c.area_k, bound);
            } else if c.area_k == bound {
                at_bound.entry(name).or_default().push(c);
            }
        }
        for (name, dim, bound) in [("two", HullDim::Two, two), ("collinear", HullDim::Collinear, col)] {
            let Some(bound) = bound else { continue };
            let fams: Vec<(FamilyId, Polygon)> =
                area_minimizers(k, i, b, dim)?.into_iter().map(|m| (m.id, m.polygon)).collect();
            let found = at_bound.remove(name).unwrap_or_default();
            acc.match_families(census, b, &found, &fams, true);
            table.insert(
                format!("{b}/{name}"),
                json!({
                    "bound": bound,
                    "observed_min": minima.get(name),
                    "equality_classes": found.len(),
                    "families": fams.len(),
                }),
            );
        }
        table.insert(format!("{b}/all"), json!({"observed_min": observed_min, "classes": cs.len()}));
    }
    acc.detail("b_max", json!(bm));
    acc.detail("per_b", Value::Object(table));
    acc.detail("classes_outside_both_cases", json!(uncovered));
    Ok(census.report("area-lower", json!({"k": k, "i": i}), acc))
}

/// Upper bound over a census. For `k >= 4` this must be a strip census
/// and every equality class must be listed; otherwise exceedances and
/// unlisted classes are findings.
pub fn check_area_upper(k: u64, i: u64, census: &Census) -> Result<VerificationReport> {
    census.expect(k, i)?;
    let bm = b_max(k, i)?;
    let strict = k >= 4;
    if strict && census.bx.y_max - census.bx.y_min > k as i64 + 1 {
        return Err(Error::Domain("strict mode needs a census of R x [-1,1/k]".into()));
    }
    let mut acc = Acc::default();
    let mut findings = Vec::new();
    let mut table = Map::new();
    let groups = by_b(census);
    for b in 0..=bm {
        let bound = max_area_normalized(k, i, b)?.to_i64().expect("fits");
        let cs = groups.get(&b).cloned().unwrap_or_default();
        let observed = cs.iter().map(|c| c.area_k).max();
        for c in cs.iter().filter(|c| c.area_k > bound) {
            if strict {
                acc.violate(c.polygon(), "area upper bound", c.area_k, bound);
            } else {
                findings.push(json!({"polygon": crate::io::PolygonFile::from_polygon(&c.polygon()), "b": b, "area_k": c.area_k, "bound": bound}));
            }
        }
        let found: Vec<&PolygonClass> = cs.iter().copied().filter(|c| c.area_k == bound).collect();
        let fams = maximizer_families(k, i, b)?;
        acc.match_families(census, b, &found, &fams, strict);
        table.insert(
            b.to_string(),
            json!({"bound": bound, "observed_max": observed, "equality_classes": found.len(), "families": fams.len()}),
        );
    }
    if !strict {
        acc.detail("findings", json!(findings));
    }
    let status = if max_area_is_conjectural(k) {
        "conjectural (established only inside R x [-1,1/k])"
    } else if k >= 4 {
        "proven"
    } else {
        "finding mode"
    };
    acc.detail("status", json!(status));
    acc.detail("per_b", Value::Object(table));
    Ok(census.report("area-upper", json!({"k": k, "i": i, "strict": strict}), acc))
}

/// The three classes of half-integral area maximizers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaximizerClass {
    /// realizable in `R × [-1,1/2]`
    HalfStrip,
    /// realizable in `R × [-1,1]` but not lower
    UnitStrip,
    /// two interior integral lines in a lattice width direction
    TwoLines,
}

/// Per-`b` maxima of a denominator-two census against the sharp bound.
pub fn check_half_integral(i: u64, census: &Census) -> Result<VerificationReport> {
    census.expect(2, i)?;
    let mut acc = Acc::default();
    let mut table = Map::new();
    let groups = by_b(census);
    let b_top = if i == 1 { 9 } else { 3 * i + 6 };
    for (&b, cs) in groups.range(b_top + 1..) {
        for c in cs {
            acc.violate(c.polygon(), "b within the half-integral range", b, b_top);
        }
    }
    for b in 0..=b_top {
        let bound = normalized(2, &half_integral_max_area(i, b)?);
        let cs = groups.get(&b).cloned().unwrap_or_default();
        let observed = cs.iter().map(|c| c.area_k).max();
        for c in cs.iter().filter(|c| c.area_k > bound) {
            acc.violate(c.polygon(), "half-integral area bound", c.area_k, bound);
        }
        if census.complete() && observed != Some(bound) {
            let p = scott_maximizer(2, i)?;
            acc.violate(p, &format!("bound attained at b = {b}"), format!("{observed:?}"), bound);
        }
        let mut classes: BTreeMap<MaximizerClass, usize> = BTreeMap::new();
        for c in cs.iter().filter(|c| c.area_k == bound) {
            let p = c.polygon();
            let (family, class) = classify_half_integral_maximizer(&p, i, b)?;
            if let Some(cl) = class {
                *classes.entry(cl).or_default() += 1;
            }
            acc.equality.push(EqualityClass { polygon: p, b, family });
        }
        table.insert(
            b.to_string(),
            json!({
                "bound": bound,
                "bound_eighths": fmt_rational(&(half_integral_max_area(i, b)? * int(8))),
                "observed_max": observed,
                "equality_classes": cs.iter().filter(|c| c.area_k == bound).count(),
                "by_class": classes,
            }),
        );
    }
    acc.detail("per_b", Value::Object(table));
    Ok(census.report("half-integral", json!({"k": 2, "i": i}), acc))
}

/// Family label and maximizer class of a half-integral maximizer.
fn classify_half_integral_maximizer(p: &Polygon, i: u64, b: u64) -> Result<(String, Option<MaximizerClass>)> {
    if let Some(q) = place_in_strip(p, &int(-1), &rat(1, 2)) {
        let fams = maximizer_families(2, i, b).unwrap_or_default();
        let hit = fams.iter().find(|(_, f)| crate::lattice::equivalent(f, &q));
        let label = hit.map_or(UNLISTED.to_string(), |(id, _)| id.to_string());
        return Ok((label, Some(MaximizerClass::HalfStrip)));
    }
    if let Some(q) = place_in_strip(p, &int(-1), &int(1)) {
        let d = unit_strip_equality_check(&q)?;
        let label = if d.holds && d.conditions_hold {
            FamilyId::new(FamilyKind::UnitStripEquality, "eq", 2, i, b, None).to_string()
        } else {
            UNLISTED.to_string()
        };
        return Ok((label, Some(MaximizerClass::UnitStrip)));
    }
    if interior_lines(p) == 2 {
        return Ok((
            FamilyId::new(FamilyKind::HalfIntegralN2, "n2", 2, i, b, None).to_string(),
            Some(MaximizerClass::TwoLines),
        ));
    }
    Ok((UNLISTED.to_string(), None))
}

/// The table of maximally attained lattice widths of maximal half-integral
/// polygons, for the covered `i`.
pub fn lw_max_table(i: u64) -> Option<Rational> {
    match i {
        1 | 2 => Some(int(3)),
        3 => Some(int(4)),
        _ => None,
    }
}

/// `f(n) = (4n^2-5n+1)/(2n-4)` from the many-lines case of the
/// half-integral bound.
pub fn lines_threshold(n: u64) -> Result<Rational> {
    if n < 3 {
        return Err(Error::Domain("f(n) needs n >= 3".into()));
    }
    let n = n as i64;
    Ok(rat(4 * n * n - 5 * n + 1, 2 * n - 4))
}

/// Maximizer partition, the two-line maximizers and `lw_max`.
///
/// Needs a census over denominators 1 and 2: the lattice-width table ranges
/// over all maximal half-integral polygons, lattice ones included (the
/// threefold triangle attains 3 for `i = 1`). Maximizers are taken among
/// the denominator-2 classes.
pub fn check_maximizer_structure(i: u64, census: &Census) -> Result<VerificationReport> {
    census.expect_with(2, i, false)?;
    let mut acc = Acc::default();
    let groups = by_b(census);
    let mut counts: BTreeMap<MaximizerClass, usize> = BTreeMap::new();
    let mut two_line = Vec::new();
    let b_top = if i == 1 { 9 } else { 3 * i + 6 };
    let threefold = Polygon::hull_of(vec![Point::ints(0, 0), Point::ints(3, 0), Point::ints(0, 3)])?;
    for b in 0..=b_top {
        let bound = normalized(2, &half_integral_max_area(i, b)?);
        for c in groups.get(&b).into_iter().flatten().filter(|c| c.area_k == bound && c.denominator() == 2) {
            let p = c.polygon();
            let (family, class) = classify_half_integral_maximizer(&p, i, b)?;
            match class {
                None => acc.violate(p.clone(), "maximizer in one of the three classes", "none", "a class"),
                Some(cl) => *counts.entry(cl).or_default() += 1,
            }
            if class == Some(MaximizerClass::TwoLines) {
                if !(1..=2).contains(&i) {
                    acc.violate(p.clone(), "two-line maximizers have i in {1,2}", i, "1 or 2");
                }
                let inside = i != 1 || embeds_in(&p, &threefold);
                if !inside {
                    acc.violate(
                        p.clone(),
                        "i = 1 two-line maximizer inside the threefold triangle",
                        "not contained",
                        "contained",
                    );
                }
                two_line.push(json!({"b": b, "polygon": crate::io::PolygonFile::from_polygon(&p), "in_threefold_triangle": inside}));
            }
            if family == UNLISTED && class != Some(MaximizerClass::TwoLines) {
                acc.violate(p.clone(), "maximizer matches its class description", UNLISTED, "listed");
            }
            acc.equality.push(EqualityClass { polygon: p, b, family });
        }
    }
    let lw = census.classes().iter().map(|c| c.lattice_width().0).max();
    let lw_max = lw.map(|w| rat(w, 2));
    if let (Some(expected), Some(got)) = (lw_max_table(i), &lw_max) {
        if census.complete() && &expected != got {
            acc.violate(scott_maximizer(2, i)?, "lw_max matches the table", fmt_rational(got), fmt_rational(&expected));
        }
    }
    let f: BTreeMap<String, String> =
        (3..=10).map(|n| (n.to_string(), fmt_rational(&lines_threshold(n).expect("n >= 3")))).collect();
    acc.detail("by_class", json!(counts));
    acc.detail("two_line_maximizers", json!(two_line));
    acc.detail("lw_max", json!(lw_max.as_ref().map(fmt_rational)));
    acc.detail("lattice_classes", json!(census.classes().iter().filter(|c| c.denominator() == 1).count()));
    acc.detail("lw_max_table", json!(lw_max_table(i).as_ref().map(fmt_rational)));
    acc.detail("f_n", json!(f));
    Ok(census.report("maximizer-structure", json!({"k": 2, "i": i}), acc))
}

/// The refined boundary bound over all classes with `b >= 3`, with a
/// sharpness witness for every observed `(b, Area_2)` cell.
pub fn check_b2p(i: u64, census: &Census) -> Result<VerificationReport> {
    census.expect(2, i)?;
    let mut acc = Acc::default();
    let mut cells: BTreeMap<(u64, u64), (u64, u64, usize)> = BTreeMap::new();
    let mut lemma_cases = 0usize;
    for c in census.classes().iter().filter(|c| c.b >= 3) {
        let a = c.area_k as u64;
        let bound = b2p_lower_bound(&B2PBoundInput::new(i, c.b, a)?);
        let got = c.refined_boundary(2);
        if got < bound {
            acc.violate(c.polygon(), "b(2P) lower bound", got, bound);
        }
        if a == 12 * i + 2 * c.b + 8 && c.b != 2 * i + 4 {
            lemma_cases += 1;
            if got < 2 * c.b + 2 {
                acc.violate(c.polygon(), "b(2P) >= 2b+2 in the unit strip equality case", got, 2 * c.b + 2);
            }
        }
        let e = cells.entry((c.b, a)).or_insert((bound, got, 0));
        e.1 = e.1.min(got);
        e.2 += 1;
    }
    let mut rows = Vec::new();
    let mut templates: BTreeMap<String, usize> = BTreeMap::new();
    for (&(b, a), &(bound, min_seen, n)) in &cells {
        let mut row = json!({"b": b, "area_2": a, "bound": bound, "min_observed": min_seen, "classes": n});
        match b2p_witness(i, b, a) {
            Ok(w) => {
                *templates.entry(template_kind(&w.template)).or_default() += 1;
                if census.complete() && census.find(&w.polygon).is_none() {
                    acc.violate(w.polygon.clone(), "witness found by the enumeration", "missing", "found");
                }
                row["template"] = json!(w.template);
                row["offset"] = json!(w.offset);
                row["printed_offset"] = json!(w.printed_offset);
                row["witness"] = json!(crate::io::PolygonFile::from_polygon(&w.polygon));
            }
            Err(e) => {
                let p = scott_maximizer(2, i)?;
                acc.violate(p, &format!("sharpness witness for (b, A) = ({b}, {a})"), e.to_string(), "a witness");
            }
        }
        rows.push(row);
    }
    acc.detail("cells", json!(rows));
    acc.detail("templates_used", json!(templates));
    acc.detail("unit_strip_equality_cases", json!(lemma_cases));
    Ok(census.report("b2p", json!({"k": 2, "i": i}), acc))
}

fn template_kind(t: &str) -> String {
    t.split('?').next().unwrap_or(t).to_string()
}

/// Distinct quasipolynomials of the `b >= 3` classes against the
/// conjectured count.
pub fn check_conjecture(i: u64, census: &Census) -> Result<VerificationReport> {
    census.expect(2, i)?;
    let mut acc = Acc::default();
    let expected = conjecture_value(i)?;
    let count = count_distinct_quasipolynomials(i, census.classes().iter().filter(|c| c.b >= 3).map(|c| c.polygon()))?;
    let matched = count as u64 == expected;
    if census.complete() && !matched {
        acc.violate(scott_maximizer(2, i)?, "distinct quasipolynomials", count, expected);
    }
    acc.detail("count", json!(count));
    acc.detail("conjecture_value", json!(expected));
    acc.detail("match", json!(matched));
    Ok(census.report("conjecture", json!({"k": 2, "i": i}), acc))
}

/// An equivalent copy of `p` inside `R × [lo, hi]`, if one exists. Tries
/// every direction of width at most `hi - lo` in both orientations, maps
/// it to `(0,1)` and translates by the first fitting integer.
pub fn place_in_strip(p: &Polygon, lo: &Rational, hi: &Rational) -> Option<Polygon> {
    let k = p.denominator().lcm(lo.denom()).lcm(hi.denom());
    let v = p.scaled(&k)?;
    let lo_g = (lo * Rational::from_integer(k.clone())).to_integer();
    let hi_g = (hi * Rational::from_integer(k.clone())).to_integer();
    if hi_g < lo_g {
        return None;
    }
    let mut dirs = grid::directions_within(&v, &(&hi_g - &lo_g));
    dirs.sort();
    // the strip is not symmetric, so both orientations of each direction
    let oriented = dirs.into_iter().flat_map(|(_, (a, b))| [(a.clone(), b.clone()), (-a, -b)]);
    for (a, b) in oriented {
        let vals: Vec<BigInt> = v.iter().map(|(x, y)| &a * x + &b * y).collect();
        let m = vals.iter().min().expect("vertices");
        let mx = vals.iter().max().expect("vertices");
        let shift = (&lo_g - m).div_ceil(&k);
        if m + &shift * &k < lo_g || mx + &shift * &k > hi_g {
            continue;
        }
        let (a, b, shift) = (a.to_i64()?, b.to_i64()?, shift.to_i64()?);
        let g = a.extended_gcd(&b);
        // rows (x', y') with det 1 and y' = a x + b y
        let matrix = [[g.y, -g.x], [a, b]];
        let map = UnimodularAffineMap::new(matrix, [0, shift]).ok()?;
        return Some(apply_map(p, &map));
    }
    None
}

/// Interior integral lines `n` across a lattice width direction, minimized
/// over all lattice width directions.
pub fn interior_lines(p: &Polygon) -> u64 {
    let k = p.denominator();
    let v = p.scaled(&k).expect("scales by its denominator");
    let (lw, _) = grid::lattice_width(&v);
    grid::directions_within(&v, &lw)
        .into_iter()
        .filter(|(f, _)| *f == lw)
        .map(|(_, (a, b))| {
            let vals: Vec<BigInt> = v.iter().map(|(x, y)| &a * x + &b * y).collect();
            let m = vals.iter().min().expect("vertices");
            let mx = vals.iter().max().expect("vertices");
            (mx.div_ceil(&k) - m.div_floor(&k) - BigInt::from(1)).to_u64().unwrap_or(0)
        })
        .min()
        .unwrap_or(0)
}

fn lattice_points(p: &Polygon, scale: &BigInt, strict: bool) -> Vec<Point> {
    let xs = p.vertices().iter().map(|v| &v.x * Rational::from_integer(scale.clone()));
    let ys = p.vertices().iter().map(|v| &v.y * Rational::from_integer(scale.clone()));
    let (x0, x1) = (xs.clone().min().expect("v").floor().to_integer(), xs.max().expect("v").ceil().to_integer());
    let (y0, y1) = (ys.clone().min().expect("v").floor().to_integer(), ys.max().expect("v").ceil().to_integer());
    let mut out = Vec::new();
    let mut x = x0;
    while x <= x1 {
        let mut y = y0.clone();
        while y <= y1 {
            let q = Point::new(Rational::new(x.clone(), scale.clone()), Rational::new(y.clone(), scale.clone()));
            if (strict && p.contains_strictly(&q)) || (!strict && p.contains(&q)) {
                out.push(q);
            }
            y += 1;
        }
        x += 1;
    }
    out
}

/// Whether `p` (with an interior lattice point) is equivalent to a subset
/// of `q`. An embedding sends an interior lattice point of `p` to one of
/// `q` and two independent vertex offsets to grid points of `q`, which
/// leaves finitely many candidate maps.
pub fn embeds_in(p: &Polygon, q: &Polygon) -> bool {
    let one = BigInt::from(1);
    let Some(c) = lattice_points(p, &one, true).into_iter().next() else {
        return false;
    };
    let kp = p.denominator();
    let offsets: Vec<Point> = p.vertices().iter().map(|v| Point::new(&v.x - &c.x, &v.y - &c.y)).collect();
    let det = |u: &Point, w: &Point| &u.x * &w.y - &u.y * &w.x;
    let Some((u1, u2)) =
        offsets.iter().flat_map(|u| offsets.iter().map(move |w| (u, w))).find(|(u, w)| !det(u, w).is_zero())
    else {
        return false;
    };
    let d = det(u1, u2);
    let targets = lattice_points(q, &kp, false);
    for c2 in lattice_points(q, &one, true) {
        let rel: Vec<Point> = targets.iter().map(|t| Point::new(&t.x - &c2.x, &t.y - &c2.y)).collect();
        for a1 in &rel {
            for a2 in &rel {
                // G = [a1 a2] [u1 u2]^-1
                let g = [
                    [(&a1.x * &u2.y - &a2.x * &u1.y) / &d, (&a2.x * &u1.x - &a1.x * &u2.x) / &d],
                    [(&a1.y * &u2.y - &a2.y * &u1.y) / &d, (&a2.y * &u1.x - &a1.y * &u2.x) / &d],
                ];
                if !g.iter().flatten().all(|e| e.is_integer()) {
                    continue;
                }
                let gdet = &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0];
                if gdet != int(1) && gdet != int(-1) {
                    continue;
                }
                let fits = offsets.iter().all(|u| {
                    let img = Point::new(
                        &g[0][0] * &u.x + &g[0][1] * &u.y + &c2.x,
                        &g[1][0] * &u.x + &g[1][1] * &u.y + &c2.y,
                    );
                    q.contains(&img)
                });
                if fits {
                    return true;
                }
            }
        }
    }
    false
}

/// True iff no half-integral point at lattice distance at most one from
/// `p` can be added without changing the number of interior lattice
/// points. Farther points would enclose a new interior point by convexity
/// with an existing one.
pub fn is_maximal_half_integral(p: &Polygon) -> Result<bool> {
    let k = p.denominator();
    if k > BigInt::from(2) {
        return Err(Error::Domain(format!("denominator {k} is not at most 2")));
    }
    let i = lattice_stats(p).i;
    let two = BigInt::from(2);
    // lattice distance <= 1: every edge pushed out by one lattice unit
    let v = p.scaled(&two).expect("half-integral");
    let n = v.len();
    let mut near = Vec::new();
    // a vertex of the pushed-out polygon moves by at most twice the sum of
    // the adjacent normals' entries
    let pad = (0..n)
        .map(|j| {
            let (a, b) = (&v[j], &v[(j + 1) % n]);
            let (ex, ey) = (&b.0 - &a.0, &b.1 - &a.1);
            let g = ex.gcd(&ey);
            (ex / &g).abs().max((ey / &g).abs())
        })
        .max()
        .expect("edges")
        * BigInt::from(4)
        + BigInt::from(1);
    let (x0, x1) = min_max(v.iter().map(|q| q.0.clone()));
    let (y0, y1) = min_max(v.iter().map(|q| q.1.clone()));
    let mut x = &x0 - &pad;
    while x <= &x1 + &pad {
        let mut y = &y0 - &pad;
        while y <= &y1 + &pad {
            let pt = (x.clone(), y.clone());
            let within = (0..n).all(|j| {
                let (a, b) = (&v[j], &v[(j + 1) % n]);
                let (ex, ey) = (&b.0 - &a.0, &b.1 - &a.1);
                let g = ex.gcd(&ey);
                // outward primitive normal (ey, -ex)/g; distance in lattice units of the grid
                let excess = (&ey * (&pt.0 - &a.0) - &ex * (&pt.1 - &a.1)) / &g;
                excess <= two
            });
            if within {
                near.push(Point::new(Rational::new(x.clone(), two.clone()), Rational::new(y.clone(), two.clone())));
            }
            y += 1;
        }
        x += 1;
    }
    for q in near {
        if p.contains(&q) {
            continue;
        }
        let grown = Polygon::hull_of(p.vertices().iter().cloned().chain(std::iter::once(q)))?;
        if lattice_stats(&grown).i == i {
            return Ok(false);
        }
    }
    Ok(true)
}

fn min_max(it: impl Iterator<Item = BigInt>) -> (BigInt, BigInt) {
    let v: Vec<BigInt> = it.collect();
    (v.iter().min().expect("nonempty").clone(), v.iter().max().expect("nonempty").clone())
}
