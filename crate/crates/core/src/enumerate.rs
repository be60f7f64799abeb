//! Exhaustive enumeration of rational polygons up to unimodular equivalence.
//!
//! Polygons live on the grid `(1/k)Z^2`, stored scaled by `k` as `i64`
//! pairs (box sizes keep every intermediate product far below `2^63`).
//! A polygon is generated once per placement as the counterclockwise vertex
//! sequence starting at its lowest-leftmost vertex. Partial hulls are pruned
//! as soon as they hold more interior lattice points than requested, which
//! is sound because the final polygon contains every partial hull. Accepted
//! placements are reduced to their canonical key and merged by set union.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Polygon;
use crate::grid::{self, Pt};

/// How a polygon has to sit inside the box to be accepted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Placement {
    /// `(0,1)` is a lattice width direction, the lowest vertex lies in
    /// `R × [0,1)`, the leftmost in `[0,1) × R`, and no horizontal shear
    /// shortens the horizontal extent.
    LatticeWidth,
    /// Inside the strip `y_min <= Y <= y_max`; leftmost vertex in `[0,1) × R`
    /// and horizontally shear-minimal.
    Strip,
}

/// Search region in grid units of `(1/k)Z^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationBox {
    pub k: i64,
    pub x_max: i64,
    pub y_min: i64,
    pub y_max: i64,
    pub i_target: u64,
    /// keep only polygons whose denominator is exactly `k`
    pub exact_denominator: bool,
    pub b_range: Option<(u64, u64)>,
    /// keep only polygons with `Area_k >= area_floor[b]`, the last entry
    /// covering all larger `b`; prunes partial hulls by an area bound
    #[serde(default)]
    pub area_floor: Option<Vec<i64>>,
    pub placement: Placement,
    /// which bound justified the box size
    pub derivation: String,
}

impl EnumerationBox {
    /// Box for all classes with `i` interior points, vertical lattice width
    /// at most `lw_max` and horizontal extent at most `x_extent`, both in
    /// grid units.
    pub fn lattice_width(k: i64, i: u64, lw_max: i64, x_extent: i64, derivation: impl Into<String>) -> Self {
        Self {
            k,
            x_max: k - 1 + x_extent,
            y_min: 0,
            y_max: k - 1 + lw_max,
            i_target: i,
            exact_denominator: true,
            b_range: None,
            area_floor: None,
            placement: Placement::LatticeWidth,
            derivation: derivation.into(),
        }
    }

    /// Polygons in `R × [-1, 1/k]` with horizontal extent at most
    /// `x_extent` grid units.
    pub fn thin_strip(k: i64, i: u64, x_extent: i64, derivation: impl Into<String>) -> Self {
        Self {
            k,
            x_max: k - 1 + x_extent,
            y_min: -k,
            y_max: 1,
            i_target: i,
            exact_denominator: true,
            b_range: None,
            area_floor: None,
            placement: Placement::Strip,
            derivation: derivation.into(),
        }
    }

    /// The same box grown by `d` grid units in each direction.
    pub fn grown(&self, d: i64) -> Self {
        let mut b = self.clone();
        b.x_max += d;
        match self.placement {
            Placement::LatticeWidth => b.y_max += d,
            // the strip itself is the certified region; only widen it sideways
            Placement::Strip => {}
        }
        b.derivation = format!("{} (+{d} saturation)", self.derivation);
        b
    }

    fn validate(&self) -> Result<()> {
        if self.k < 1 || self.x_max < 1 || self.y_max <= self.y_min {
            return Err(Error::Domain(format!("invalid enumeration box {self:?}")));
        }
        if self.x_max > 1 << 12 || self.y_max - self.y_min > 1 << 12 {
            return Err(Error::Domain("enumeration box too large for the i64 kernel".into()));
        }
        if self.area_floor.as_ref().is_some_and(|f| f.is_empty()) {
            return Err(Error::Domain("area floor table is empty".into()));
        }
        Ok(())
    }
}

/// One equivalence class found by the enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolygonClass {
    /// canonical scaled vertices (see [`grid::canonical_key`])
    pub key: Vec<Pt<i64>>,
    pub k: i64,
    pub i: u64,
    pub b: u64,
    /// `2k^2 area` with `k` the grid scale
    pub area_k: i64,
}

impl PolygonClass {
    fn from_vertices(k: i64, verts: &[Pt<i64>], i: u64) -> Self {
        let key = grid::canonical_key(&k, verts);
        let b = grid::boundary_count(&k, &key) as u64;
        let area_k = grid::twice_area(&key);
        Self { key, k, i, b, area_k }
    }

    /// The class of `p` on the grid `(1/k)Z^2`, if its vertices lie there
    /// and fit the `i64` kernel.
    pub fn from_polygon(k: i64, p: &Polygon) -> Option<Self> {
        use num::ToPrimitive;
        let scaled = p.scaled(&BigInt::from(k))?;
        let verts = scaled.iter().map(|(x, y)| Some((x.to_i64()?, y.to_i64()?))).collect::<Option<Vec<Pt<i64>>>>()?;
        if verts.iter().any(|p| p.0.abs() > 1 << 20 || p.1.abs() > 1 << 20) {
            return None;
        }
        let i = grid::interior_count(&k, &verts) as u64;
        Some(Self::from_vertices(k, &verts, i))
    }

    pub fn polygon(&self) -> Polygon {
        let v: Vec<(BigInt, BigInt)> = self.key.iter().map(|&(x, y)| (BigInt::from(x), BigInt::from(y))).collect();
        Polygon::from_scaled(&BigInt::from(self.k), &v)
    }

    /// Half-integral boundary points `|∂P ∩ (1/2)Z^2|`, i.e. `b(2P)`.
    pub fn refined_boundary(&self, m: i64) -> u64 {
        let v: Vec<Pt<i64>> = self.key.iter().map(|&(x, y)| (x * m, y * m)).collect();
        grid::boundary_count(&self.k, &v) as u64
    }

    pub fn denominator(&self) -> i64 {
        grid::denominator(&self.k, &self.key)
    }

    pub fn lattice_width(&self) -> (i64, Pt<i64>) {
        grid::lattice_width(&self.key)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    /// rayon with an optional thread cap
    Parallel(Option<usize>),
}

impl Default for Parallelism {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            let cap = std::env::var("LATPOLY_THREADS").ok().and_then(|s| s.parse().ok());
            Parallelism::Parallel(cap)
        } else {
            Parallelism::Sequential
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct EnumerationConfig {
    /// maximal number of search nodes; `None` is unbounded
    pub budget: Option<u64>,
    pub parallelism: Parallelism,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub classes: Vec<PolygonClass>,
    pub nodes: u64,
    pub complete: bool,
}

impl Enumeration {
    pub fn polygons(&self) -> impl Iterator<Item = Polygon> + '_ {
        self.classes.iter().map(PolygonClass::polygon)
    }
}

/// All classes in the box, sorted by canonical key.
pub fn enumerate_polygons(bx: &EnumerationBox) -> Result<Enumeration> {
    enumerate_with(bx, &EnumerationConfig::default())
}

/// Like [`enumerate_polygons`], but fails with `ResourceLimit` instead of
/// returning an incomplete result.
pub fn enumerate_complete(bx: &EnumerationBox, cfg: &EnumerationConfig) -> Result<Enumeration> {
    let e = enumerate_with(bx, cfg)?;
    if e.complete {
        Ok(e)
    } else {
        Err(Error::ResourceLimit { budget: cfg.budget.unwrap_or(0), explored: e.nodes })
    }
}

pub fn enumerate_with(bx: &EnumerationBox, cfg: &EnumerationConfig) -> Result<Enumeration> {
    bx.validate()?;
    let tasks = first_edges(bx);
    let shared =
        Shared { nodes: AtomicU64::new(0), abort: AtomicBool::new(false), budget: cfg.budget.unwrap_or(u64::MAX) };
    let run = |t: &Task| run_task(bx, t, &shared);
    let merged: HashMap<Vec<Pt<i64>>, PolygonClass> = match cfg.parallelism {
        Parallelism::Sequential => tasks.iter().map(run).fold(HashMap::new(), merge),
        Parallelism::Parallel(cap) => parallel_run(&tasks, cap, &run),
    };
    let mut classes: Vec<PolygonClass> = merged.into_values().collect();
    classes.sort();
    Ok(Enumeration {
        classes,
        nodes: shared.nodes.load(Ordering::Relaxed),
        complete: !shared.abort.load(Ordering::Relaxed),
    })
}

type ClassMap = HashMap<Vec<Pt<i64>>, PolygonClass>;

fn merge(mut a: ClassMap, b: ClassMap) -> ClassMap {
    if a.len() < b.len() {
        return merge(b, a);
    }
    a.extend(b);
    a
}

#[cfg(feature = "parallel")]
fn parallel_run<F>(tasks: &[Task], cap: Option<usize>, run: &F) -> ClassMap
where
    F: Fn(&Task) -> ClassMap + Sync,
{
    use rayon::prelude::*;
    let go = || tasks.par_iter().map(run).reduce(HashMap::new, merge);
    match cap {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().expect("thread pool").install(go),
        None => go(),
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_run<F>(tasks: &[Task], _cap: Option<usize>, run: &F) -> ClassMap
where
    F: Fn(&Task) -> ClassMap + Sync,
{
    tasks.iter().map(run).fold(HashMap::new(), merge)
}

struct Shared {
    nodes: AtomicU64,
    abort: AtomicBool,
    budget: u64,
}

/// A subtree of the search: fixed lowest vertex and first edge.
struct Task {
    v0: Pt<i64>,
    v1: Pt<i64>,
}

fn lowest_rows(bx: &EnumerationBox) -> std::ops::RangeInclusive<i64> {
    match bx.placement {
        Placement::LatticeWidth => bx.y_min..=(bx.y_min + bx.k - 1).min(bx.y_max),
        Placement::Strip => bx.y_min..=bx.y_max,
    }
}

fn after(v0: &Pt<i64>, p: &Pt<i64>) -> bool {
    p.1 > v0.1 || (p.1 == v0.1 && p.0 > v0.0)
}

fn first_edges(bx: &EnumerationBox) -> Vec<Task> {
    let mut tasks = Vec::new();
    for y0 in lowest_rows(bx) {
        for x0 in 0..=bx.x_max {
            let v0 = (x0, y0);
            for y in y0..=bx.y_max {
                for x in 0..=bx.x_max {
                    if after(&v0, &(x, y)) {
                        tasks.push(Task { v0, v1: (x, y) });
                    }
                }
            }
        }
    }
    tasks
}

/// Lowest lattice row strictly above `y0` plus one: the minimal top height
/// for a polygon with interior lattice points.
fn min_top(k: i64, y0: i64) -> i64 {
    (y0.div_euclid(k) + 1) * k + 1
}

struct Search<'a> {
    bx: &'a EnumerationBox,
    shared: &'a Shared,
    v0: Pt<i64>,
    /// lattice points strictly inside `v0-p`, indexed by box position
    relint: Vec<u64>,
    chain: Vec<Pt<i64>>,
    min_top: i64,
    /// `reachable_floor[b]`: least area floor over all boundary counts `>= b`
    reachable_floor: Option<Vec<i64>>,
    local_nodes: u64,
    out: ClassMap,
}

fn run_task(bx: &EnumerationBox, t: &Task, shared: &Shared) -> ClassMap {
    if shared.abort.load(Ordering::Relaxed) {
        return ClassMap::new();
    }
    let k = bx.k;
    let v0 = t.v0;
    let v0_lattice = i64::from(v0.0 % k == 0 && v0.1 % k == 0);
    let mut relint = Vec::with_capacity(((bx.x_max + 1) * (bx.y_max - v0.1 + 1)) as usize);
    for y in v0.1..=bx.y_max {
        for x in 0..=bx.x_max {
            relint.push((grid::half_open_count(&k, &v0, &(x, y)) - v0_lattice).max(0) as u64);
        }
    }
    let mut s = Search {
        bx,
        shared,
        v0,
        relint,
        chain: vec![t.v1],
        min_top: match bx.placement {
            Placement::LatticeWidth => min_top(k, v0.1),
            Placement::Strip => min_top(k, v0.1).min(bx.y_max),
        },
        reachable_floor: bx.area_floor.as_ref().map(|f| {
            let mut m = f.clone();
            for j in (0..m.len().saturating_sub(1)).rev() {
                m[j] = m[j].min(m[j + 1]);
            }
            m
        }),
        local_nodes: 0,
        out: ClassMap::new(),
    };
    let region = s.initial_region();
    let edge = grid::half_open_count(&k, &v0, &t.v1) as u64;
    s.extend(0, t.v1.1, edge, region);
    shared.nodes.fetch_add(s.local_nodes, Ordering::Relaxed);
    s.out
}

impl Search<'_> {
    fn relint_to(&self, p: &Pt<i64>) -> u64 {
        self.relint[((p.1 - self.v0.1) * (self.bx.x_max + 1) + p.0) as usize]
    }

    /// `boundary` counts the lattice points on the chain edges, each of
    /// which is an edge of every completion.
    fn extend(&mut self, interior: u64, top: i64, boundary: u64, region: Vec<(f64, f64)>) {
        self.local_nodes += 1;
        if self.local_nodes & 0xfff == 0 {
            let total = self.shared.nodes.fetch_add(self.local_nodes, Ordering::Relaxed) + self.local_nodes;
            self.local_nodes = 0;
            if total > self.shared.budget {
                self.shared.abort.store(true, Ordering::Relaxed);
            }
        }
        if self.shared.abort.load(Ordering::Relaxed) {
            return;
        }
        let n = self.chain.len();
        let last = self.chain[n - 1];
        let prev = if n >= 2 { self.chain[n - 2] } else { self.v0 };
        if self.hopeless(&region, top, boundary) {
            return;
        }
        if n >= 2 && interior == self.bx.i_target && top >= self.min_top && grid::cross(&prev, &last, &self.v0) > 0 {
            self.accept();
        }
        let k = self.bx.k;
        let target = self.bx.i_target;
        let diag = if n >= 2 { self.relint_to(&last) } else { 0 };
        let base = interior + diag;
        if base > target || self.forced_interior(&region, top) > target {
            return;
        }
        let v0 = self.v0;
        let (y_lo, y_hi) = f64_range(region.iter().map(|p| p.1));
        let y_from = ((y_lo - EPS).ceil() as i64).max(v0.1);
        let y_to = ((y_hi + EPS).floor() as i64).min(self.bx.y_max);
        for y in y_from..=y_to {
            // once the boundary turns downwards the top is final
            if y < last.1 && top < self.min_top {
                continue;
            }
            let Some((l, r)) = row_slice(&region, y as f64) else {
                continue;
            };
            let x_from = ((l - EPS).ceil() as i64).max(0);
            let x_to = ((r + EPS).floor() as i64).min(self.bx.x_max);
            for x in x_from..=x_to {
                let p = (x, y);
                if !after(&v0, &p) || grid::cross(&v0, &last, &p) <= 0 || grid::cross(&prev, &last, &p) <= 0 {
                    continue;
                }
                let Some(add) = triangle_interior(k, &v0, &last, &p, target - base) else {
                    continue;
                };
                let sub = clip_left(&region, last, p);
                self.chain.push(p);
                let edge = grid::half_open_count(&k, &last, &p) as u64;
                self.extend(base + add, top.max(y), boundary + edge, sub);
                self.chain.pop();
            }
        }
    }

    /// The box cut by the left half-plane of the first edge. Each step cuts
    /// by the new edge, so the region always contains every completion.
    fn initial_region(&self) -> Vec<(f64, f64)> {
        let bx = self.bx;
        let poly = [
            (0.0, self.v0.1 as f64),
            (bx.x_max as f64, self.v0.1 as f64),
            (bx.x_max as f64, bx.y_max as f64),
            (0.0, bx.y_max as f64),
        ];
        clip_left(&poly, self.v0, self.chain[0])
    }

    fn hopeless(&self, poly: &[(f64, f64)], top: i64, boundary: u64) -> bool {
        if poly.len() < 3 {
            return true;
        }
        let bx = self.bx;
        let k = bx.k;
        let (_, y_hi) = f64_range(poly.iter().map(|p| p.1));
        if y_hi < self.min_top as f64 - EPS {
            return true;
        }
        let (x_lo, _) = f64_range(poly.iter().map(|p| p.0));
        if x_lo > (k - 1) as f64 + EPS {
            return true;
        }
        if lattice_points_upper(k, poly) < bx.i_target {
            return true;
        }
        // the final polygon lies inside the region
        if let Some(floors) = &self.reachable_floor {
            let floor = floors[(boundary as usize).min(floors.len() - 1)];
            if twice_area_f64(poly) < floor as f64 - EPS || self.twice_area_upper(poly, top) < floor as f64 - EPS {
                return true;
            }
        }
        let span = |w: (f64, f64)| {
            let (lo, hi) = f64_range(poly.iter().map(|p| w.0 * p.0 + w.1 * p.1));
            hi - lo
        };
        let (xl, xh) = std::iter::once(&self.v0)
            .chain(&self.chain)
            .fold((i64::MAX, i64::MIN), |(l, h), p| (l.min(p.0), h.max(p.0)));
        let partial_w10 = (xh - xl) as f64;
        // horizontal extent can only grow, sheared extents are capped by R
        if partial_w10 > span((1.0, 1.0)) + EPS || partial_w10 > span((1.0, -1.0)) + EPS {
            return true;
        }
        if bx.placement == Placement::LatticeWidth {
            let h = (top - self.v0.1) as f64;
            if WIDTH_PROBES.iter().any(|&w| span(w) < h - EPS) {
                return true;
            }
        }
        false
    }

    /// Lower bound for the interior lattice points of every completion that
    /// still has to climb to `min_top`. Such a completion contains the
    /// chain and some top vertex `t` of the region at height `T`, so each
    /// lattice row strictly between `v0` and `T` meets it in a chord at
    /// least as long as the chord of the hull of `t` and the chain points
    /// below that row. The bound is minimized over all admissible `t`.
    fn forced_interior(&self, region: &[(f64, f64)], top: i64) -> u64 {
        if top >= self.min_top {
            return 0;
        }
        let k = self.bx.k;
        let kf = k as f64;
        let (_, y_hi) = f64_range(region.iter().map(|p| p.1));
        let t_max = ((y_hi + EPS).floor() as i64).min(self.bx.y_max);
        let first_row = self.v0.1.div_euclid(k) + 1;
        let mut best = u64::MAX;
        let mut lines: Vec<(f64, f64)> = Vec::with_capacity(self.chain.len() + 1);
        for t in self.min_top..=t_max {
            let Some((l, r)) = row_slice(region, t as f64) else {
                continue;
            };
            let mut total = 0u64;
            let mut j = first_row;
            while j * k < t {
                let y = (j * k) as f64;
                lines.clear();
                for p in std::iter::once(&self.v0).chain(&self.chain) {
                    if p.1 as f64 <= y {
                        // x-coordinate of the point at height y on the segment p -> t
                        let lam = (y - p.1 as f64) / (t as f64 - p.1 as f64);
                        lines.push((p.0 as f64 * (1.0 - lam), lam));
                    }
                }
                let chord = min_spread(&lines, l, r);
                total += ((chord / kf - 1e-6).ceil() - 1.0).max(0.0) as u64;
                j += 1;
            }
            best = best.min(total);
            if best == 0 {
                break;
            }
        }
        if best == u64::MAX {
            0
        } else {
            best
        }
    }

    /// Upper bound for twice the area of every completion. Each lattice row
    /// strictly between `v0` and the final top carries a chord of at most
    /// `(i+1)` units, and by convexity chords shrink at most linearly
    /// towards the row's opposite side. Between consecutive lattice rows
    /// the chord bound is concave, so the midpoint rule overestimates.
    fn twice_area_upper(&self, poly: &[(f64, f64)], top: i64) -> f64 {
        let k = self.bx.k;
        let (y_lo, y_hi) = f64_range(poly.iter().map(|p| p.1));
        let y_lo = y_lo.max(self.v0.1 as f64);
        let t0 = top.max(self.min_top);
        let cap = ((self.bx.i_target + 1) * k as u64) as f64;
        let bottom = self.v0.1 as f64;
        let rows: Vec<f64> =
            (self.v0.1.div_euclid(k) + 1..).map(|j| (j * k) as f64).take_while(|&y| y < t0 as f64).collect();
        let bound = |y: f64| {
            let mut b = row_slice(poly, y).map_or(0.0, |(l, r)| r - l);
            for &r in &rows {
                let f = if y <= r {
                    // the top lies at or above t0
                    cap * (t0 as f64 - y) / (t0 as f64 - r)
                } else {
                    cap * (y - bottom) / (r - bottom)
                };
                b = b.min(f);
            }
            b
        };
        let mut cuts = vec![y_lo];
        cuts.extend(rows.iter().copied().filter(|&r| r > y_lo && r < y_hi));
        cuts.push(y_hi);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            const STEPS: usize = 4;
            let h = (w[1] - w[0]) / STEPS as f64;
            for s in 0..STEPS {
                total += h * bound(w[0] + (s as f64 + 0.5) * h);
            }
        }
        2.0 * total
    }

    fn accept(&mut self) {
        let bx = self.bx;
        let k = bx.k;
        let mut verts = Vec::with_capacity(self.chain.len() + 1);
        verts.push(self.v0);
        verts.extend_from_slice(&self.chain);
        let x_min = verts.iter().map(|p| p.0).min().expect("vertices");
        if x_min >= k {
            return;
        }
        let w10 = grid::width(&verts, &(1, 0));
        if w10 > grid::width(&verts, &(1, 1)) || w10 > grid::width(&verts, &(1, -1)) {
            return;
        }
        if bx.placement == Placement::LatticeWidth {
            let h = verts.iter().map(|p| p.1).max().expect("vertices") - self.v0.1;
            if w10 < h || grid::lattice_width(&verts).0 != h {
                return;
            }
        }
        if let Some(floors) = &bx.area_floor {
            let b = grid::boundary_count(&k, &verts) as usize;
            if grid::twice_area(&verts) < floors[b.min(floors.len() - 1)] {
                return;
            }
        }
        if bx.exact_denominator && grid::denominator(&k, &verts) != k {
            return;
        }
        if let Some((lo, hi)) = bx.b_range {
            let b = grid::boundary_count(&k, &verts) as u64;
            if b < lo || b > hi {
                return;
            }
        }
        let class = PolygonClass::from_vertices(k, &verts, bx.i_target);
        self.out.entry(class.key.clone()).or_insert(class);
    }
}

fn twice_area_f64(poly: &[(f64, f64)]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|j| {
            let (p, q) = (poly[j], poly[(j + 1) % n]);
            p.0 * q.1 - p.1 * q.0
        })
        .sum::<f64>()
        .abs()
}

/// `min` over `x` in `[l, r]` of the spread `max - min` of the affine
/// functions `a + m x`. The spread is convex, so it is minimized at an
/// endpoint or where two of the functions cross.
fn min_spread(lines: &[(f64, f64)], l: f64, r: f64) -> f64 {
    if lines.len() < 2 {
        return 0.0;
    }
    let spread = |x: f64| {
        let (lo, hi) = f64_range(lines.iter().map(|&(a, m)| a + m * x));
        hi - lo
    };
    let mut best = spread(l).min(spread(r));
    for (n, &(a, m)) in lines.iter().enumerate() {
        for &(b, q) in &lines[n + 1..] {
            if (m - q).abs() > 1e-12 {
                let x = (b - a) / (m - q);
                if x > l && x < r {
                    best = best.min(spread(x));
                }
            }
        }
    }
    best
}

fn f64_range(it: impl Iterator<Item = f64>) -> (f64, f64) {
    it.fold((f64::MAX, f64::MIN), |(l, h), v| (l.min(v), h.max(v)))
}

/// Horizontal slice of a convex polygon at height `y`, widened by the
/// tolerance.
fn row_slice(poly: &[(f64, f64)], y: f64) -> Option<(f64, f64)> {
    let (mut l, mut r) = (f64::MAX, f64::MIN);
    for (n, p) in poly.iter().enumerate() {
        let q = &poly[(n + 1) % poly.len()];
        let (a, b) = if p.1 <= q.1 { (p, q) } else { (q, p) };
        if y < a.1 - EPS || y > b.1 + EPS {
            continue;
        }
        if b.1 - a.1 < EPS {
            l = l.min(a.0.min(b.0));
            r = r.max(a.0.max(b.0));
        } else {
            let x = a.0 + ((y - a.1) / (b.1 - a.1)).clamp(0.0, 1.0) * (b.0 - a.0);
            l = l.min(x);
            r = r.max(x);
        }
    }
    (r >= l).then_some((l, r))
}

const EPS: f64 = 1e-7;

const WIDTH_PROBES: [(f64, f64); 7] =
    [(1.0, 0.0), (1.0, 1.0), (1.0, -1.0), (1.0, 2.0), (1.0, -2.0), (2.0, 1.0), (2.0, -1.0)];

/// Part of the convex polygon on the left of (or within tolerance of) the
/// directed line `a -> b`.
fn clip_left(poly: &[(f64, f64)], a: Pt<i64>, b: Pt<i64>) -> Vec<(f64, f64)> {
    let (dx, dy) = ((b.0 - a.0) as f64, (b.1 - a.1) as f64);
    let side = |p: &(f64, f64)| dx * (p.1 - a.1 as f64) - dy * (p.0 - a.0 as f64);
    let tol = EPS * (dx.abs() + dy.abs());
    let mut out = Vec::with_capacity(poly.len() + 1);
    for (j, p) in poly.iter().enumerate() {
        let q = &poly[(j + 1) % poly.len()];
        let (sp, sq) = (side(p), side(q));
        if sp >= -tol {
            out.push(*p);
        }
        if (sp >= -tol) != (sq >= -tol) {
            let t = sp / (sp - sq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

/// Upper bound for the lattice points of a closed convex polygon given in
/// grid coordinates.
fn lattice_points_upper(k: i64, poly: &[(f64, f64)]) -> u64 {
    let kf = k as f64;
    let (y_lo, y_hi) = f64_range(poly.iter().map(|p| p.1));
    let mut count = 0u64;
    let mut j = ((y_lo - EPS) / kf).ceil() as i64;
    while (j * k) as f64 <= y_hi + EPS {
        if let Some((l, r)) = row_slice(poly, (j * k) as f64) {
            let first = ((l - EPS) / kf).ceil() as i64;
            let last = ((r + EPS) / kf).floor() as i64;
            count += (last - first + 1).max(0) as u64;
        }
        j += 1;
    }
    count
}

/// Interior lattice points of the triangle, or `None` once more than
/// `limit` are found.
fn triangle_interior(k: i64, a: &Pt<i64>, b: &Pt<i64>, c: &Pt<i64>, limit: u64) -> Option<u64> {
    let mut v = [*a, *b, *c];
    v.sort_by_key(|p| p.1);
    let [lo, mid, hi] = v;
    if lo.1 == hi.1 {
        return Some(0);
    }
    let mut count = 0u64;
    let mut y = (lo.1.div_euclid(k) + 1) * k;
    while y < hi.1 {
        // long edge lo-hi and the short edge on the same side of mid
        let (n1, d1) = edge_x(&lo, &hi, y);
        let (n2, d2) = if y < mid.1 {
            edge_x(&lo, &mid, y)
        } else if y > mid.1 {
            edge_x(&mid, &hi, y)
        } else {
            (mid.0, 1)
        };
        let (l, r) = if n1 * d2 <= n2 * d1 { ((n1, d1), (n2, d2)) } else { ((n2, d2), (n1, d1)) };
        let first = l.0.div_euclid(l.1 * k) + 1;
        let last = -((-r.0).div_euclid(r.1 * k)) - 1;
        if last >= first {
            count += (last - first + 1) as u64;
            if count > limit {
                return None;
            }
        }
        y += k;
    }
    Some(count)
}

/// x-coordinate of the edge `p-q` at height `y`, as `n / d` with `d > 0`.
fn edge_x(p: &Pt<i64>, q: &Pt<i64>, y: i64) -> (i64, i64) {
    let d = q.1 - p.1;
    let n = p.0 * d + (y - p.1) * (q.0 - p.0);
    if d < 0 {
        (-n, -d)
    } else {
        (n, d)
    }
}
