//! Acceptance run: one pass/fail line per criterion. Pass criterion numbers
//! as arguments to run a subset, e.g. `cargo test --test acceptance -- 5 8`.

mod common;

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use latpoly::ehrhart::{b2p_witness, conjecture_value, ehrhart_count, quasipolynomial, refined_boundary_count};
use latpoly::enumerate::{enumerate_with, EnumerationConfig, Parallelism};
use latpoly::exact::{int, rat};
use latpoly::extremal::{
    area_minimizers, b_max, intermediate_polygon, max_area_normalized, maximizer_families, scott_maximizer, HullDim,
};
use latpoly::lattice::{apply_map, canonical_form, equivalent, lattice_stats};
use latpoly::verify::{self, Census, VerificationReport};
use num::BigInt;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::Value;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

#[derive(Default)]
struct Censuses {
    /// `k = 2` runs keep lattice classes; the exact parts are derived
    half1: OnceCell<Census>,
    half2: OnceCell<Census>,
    exact21: OnceCell<Census>,
    exact22: OnceCell<Census>,
    exact31: OnceCell<Census>,
    strip41: OnceCell<Census>,
}

fn run(bx: latpoly::enumerate::EnumerationBox) -> Census {
    let c = Census::run(bx, &EnumerationConfig::default()).expect("valid box");
    eprintln!(
        "  census k={} i={}: {} classes, {} nodes, {} ms",
        c.bx.k,
        c.bx.i_target,
        c.classes().len(),
        c.enumeration.nodes,
        c.elapsed_ms
    );
    c
}

impl Censuses {
    fn half(&self, i: u64) -> &Census {
        let cell = if i == 1 { &self.half1 } else { &self.half2 };
        cell.get_or_init(|| run(verify::half_integral_box(i).expect("box")))
    }

    fn exact(&self, k: u64, i: u64) -> &Census {
        match (k, i) {
            (2, 1) => self.exact21.get_or_init(|| self.half(1).exact_part()),
            (2, 2) => self.exact22.get_or_init(|| self.half(2).exact_part()),
            (3, 1) => self.exact31.get_or_init(|| run(verify::certified_box(3, 1).expect("box"))),
            _ => unreachable!("no census for ({k},{i})"),
        }
    }

    fn strip41(&self) -> &Census {
        self.strip41.get_or_init(|| run(verify::upper_strip_box(4, 1).expect("box")))
    }
}

fn clean(r: &VerificationReport) -> std::result::Result<(), String> {
    ensure!(r.complete, "{} census incomplete", r.task);
    ensure!(
        r.violations.is_empty(),
        "{}: {} violations, first: {:?}",
        r.task,
        r.violations.len(),
        r.violations.first().map(|v| (&v.check, &v.observed, &v.expected))
    );
    Ok(())
}

fn detail<'a>(r: &'a VerificationReport, path: &[&str]) -> &'a Value {
    path.iter().fold(&r.details, |v, key| &v[*key])
}

fn scott(cs: &Censuses) -> Outcome {
    let mut out = Vec::new();
    for (k, i) in [(2, 1), (2, 2), (3, 1)] {
        let census = cs.exact(k, i);
        let r = verify::check_scott(k, i, census).map_err(|e| e.to_string())?;
        clean(&r)?;
        let bm = b_max(k, i).unwrap();
        let top: Vec<_> = census.classes().iter().filter(|c| c.b == bm).collect();
        ensure!(top.len() == 1, "({k},{i}): {} classes at b = {bm}", top.len());
        ensure!(
            equivalent(&top[0].polygon(), &scott_maximizer(k, i).unwrap()),
            "({k},{i}): equality class is not the Scott triangle"
        );
        ensure!(census.classes().iter().all(|c| c.b <= bm), "({k},{i}): b above {bm}");
        out.push(format!("({k},{i}) b_max={bm} over {} classes in {} ms", census.classes().len(), census.elapsed_ms));
    }
    Ok(out.join("; "))
}

fn area_lower(cs: &Censuses) -> Outcome {
    let mut cells = 0;
    for (k, i) in [(2, 1), (3, 1)] {
        let census = cs.exact(k, i);
        let r = verify::check_area_lower(k, i, census).map_err(|e| e.to_string())?;
        clean(&r)?;
        let per_b = detail(&r, &["per_b"]).as_object().expect("table");
        for (key, row) in per_b.iter().filter(|(key, _)| !key.ends_with("/all")) {
            ensure!(
                row["observed_min"] == row["bound"],
                "({k},{i}) {key}: minimum {} vs bound {}",
                row["observed_min"],
                row["bound"]
            );
            ensure!(
                row["equality_classes"] == row["families"],
                "({k},{i}) {key}: {} equality classes vs {} family members",
                row["equality_classes"],
                row["families"]
            );
            cells += 1;
        }
    }
    let spot = |k: u64, i: u64, b: u64, dim: HullDim| area_minimizers(k, i, b, dim).map(|v| v.len()).unwrap_or(0);
    ensure!(spot(3, 1, 3, HullDim::Two) == 7, "(3,1,3) has {} minimizers", spot(3, 1, 3, HullDim::Two));
    ensure!(spot(2, 1, 5, HullDim::Two) == 7, "(2,1,5) has {} minimizers", spot(2, 1, 5, HullDim::Two));
    ensure!(spot(3, 1, 2, HullDim::Collinear) == 7, "(3,1,2) collinear has {}", spot(3, 1, 2, HullDim::Collinear));
    let r31 = verify::check_area_lower(3, 1, cs.exact(3, 1)).map_err(|e| e.to_string())?;
    for (key, want) in [("3/two", 7), ("2/collinear", 7)] {
        ensure!(
            detail(&r31, &["per_b", key, "equality_classes"]) == want,
            "(3,1) {key}: enumeration found {}",
            detail(&r31, &["per_b", key, "equality_classes"])
        );
    }
    let r21 = verify::check_area_lower(2, 1, cs.exact(2, 1)).map_err(|e| e.to_string())?;
    ensure!(detail(&r21, &["per_b", "5/two", "equality_classes"]) == 7, "(2,1) 5/two mismatch");
    Ok(format!("{cells} (b, hull) cells at the bound with matching families"))
}

fn area_upper(cs: &Censuses) -> Outcome {
    let mut members = 0;
    for i in [1, 2] {
        for b in 0..=b_max(4, i).unwrap() {
            let bound = max_area_normalized(4, i, b).unwrap();
            for (id, p) in maximizer_families(4, i, b).unwrap() {
                let s = lattice_stats(&p);
                ensure!(
                    (s.i, s.b) == (i, b) && s.k == BigInt::from(4),
                    "{id}: stats (i,b,k) = ({},{},{})",
                    s.i,
                    s.b,
                    s.k
                );
                ensure!(s.area_k == bound, "{id}: Area_4 {} vs formula {bound}", s.area_k);
                members += 1;
            }
        }
    }
    for (b, want) in [(13, 200), (1, 158), (0, 153), (9, 190)] {
        ensure!(
            max_area_normalized(4, 1, b).unwrap() == BigInt::from(want),
            "(4,1,{b}) formula gives {}",
            max_area_normalized(4, 1, b).unwrap()
        );
    }
    let census = cs.strip41();
    let r = verify::check_area_upper(4, 1, census).map_err(|e| e.to_string())?;
    clean(&r)?;
    for (b, want) in [(13, 1), (12, 1), (9, 4)] {
        let got = detail(&r, &["per_b", &b.to_string(), "equality_classes"]);
        ensure!(got == want, "strip b = {b}: {got} equality classes, expected {want}");
    }
    Ok(format!(
        "{members} family members consistent; strip census {} classes in {} ms",
        census.classes().len(),
        census.elapsed_ms
    ))
}

fn half_integral(cs: &Censuses) -> Outcome {
    let mut out = Vec::new();
    for i in [1, 2] {
        let r = verify::check_half_integral(i, cs.exact(2, i)).map_err(|e| e.to_string())?;
        clean(&r)?;
        let top = if i == 1 { 9 } else { 3 * i + 6 };
        for b in 0..=top {
            let want = max_area_normalized_half(i, b);
            let got = cs.exact(2, i).classes().iter().filter(|c| c.b == b).map(|c| c.area_k).max();
            ensure!(got == Some(want), "i={i}, b={b}: maximum {got:?} vs {want}");
        }
        let t = verify::check_maximizer_structure(i, cs.half(i)).map_err(|e| e.to_string())?;
        clean(&t)?;
        out.push(format!("i={i}: {} by class {}", detail(&t, &["lw_max"]), detail(&t, &["by_class"])));
    }
    Ok(out.join("; "))
}

fn max_area_normalized_half(i: u64, b: u64) -> i64 {
    use num::ToPrimitive;
    let a = latpoly::extremal::half_integral_max_area(i, b).unwrap();
    (a * int(8)).to_integer().to_i64().unwrap()
}

fn ehrhart() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xE4);
    let mut by_k = BTreeMap::new();
    for n in 0..1000 {
        let k = 1 + (n % 3) as i64;
        let p = common::random_polygon(&mut rng, k, 3);
        let s = lattice_stats(&p);
        let d: u64 = num::ToPrimitive::to_u64(&s.k).unwrap();
        *by_k.entry(d).or_insert(0) += 1;
        let q = quasipolynomial(&p);
        for t in 1..=4 * d {
            ensure!(q.evaluate(t) == int(ehrhart_count(&p, t) as i64), "prediction differs at t = {t}");
        }
        let b2 = refined_boundary_count(&p, 2) as i64;
        // Pick's theorem on 2P, which is a lattice polygon only for d <= 2
        if d <= 2 {
            let area_2 = (&p.area() * int(8)).to_integer();
            ensure!((area_2 - b2) % 2 == BigInt::from(0), "Area_2 - b(2P) odd");
        }
        if d == 2 {
            let (i, b) = (s.i as i64, s.b as i64);
            ensure!(q.c1_at(1) == &rat(b, 2), "c1(1) != b/2");
            ensure!(q.c2_at(1) == &(int(i) + rat(b, 2) - &s.area), "c2(1) != i + b/2 - area");
            ensure!(q.c1_at(2) == &rat(b2, 4), "c1(2) != b(2P)/4");
            ensure!(q.c2_at(2) == &int(1), "c2(2) != 1");
        }
    }
    Ok(format!("1000 polygons, by denominator {by_k:?}"))
}

fn b2p(cs: &Censuses) -> Outcome {
    let r = verify::check_b2p(2, cs.exact(2, 2)).map_err(|e| e.to_string())?;
    clean(&r)?;
    let templates = detail(&r, &["templates_used"]).as_object().expect("map");
    for t in ["main", "second-top-vertex", "triangle"] {
        ensure!(templates.contains_key(t), "template {t} unused");
    }
    let tri = b2p_witness(2, 8, 48).map_err(|e| e.to_string())?;
    ensure!(tri.template == "triangle", "(8, 48) witness from {}", tri.template);
    let hex = b2p_witness(2, 5, 42).map_err(|e| e.to_string())?;
    let got = refined_boundary_count(&hex.polygon, 2);
    ensure!(got == 12, "(5, 42) witness has b(2P) = {got}");
    let cells = detail(&r, &["cells"]).as_array().map_or(0, Vec::len);
    Ok(format!("{cells} (b, A) cells witnessed; templates {}", Value::Object(templates.clone())))
}

fn conjecture(cs: &Censuses) -> Outcome {
    let r = verify::check_conjecture(2, cs.exact(2, 2)).map_err(|e| e.to_string())?;
    clean(&r)?;
    let count = detail(&r, &["count"]);
    let want = conjecture_value(2).unwrap();
    ensure!(want == 408 && count == want, "count {count} vs {want}");
    Ok(format!("{count} distinct quasipolynomials"))
}

fn intermediate() -> Outcome {
    let start = Instant::now();
    for n in 69..=91 {
        let p = intermediate_polygon(3, 1, 8, &BigInt::from(n)).map_err(|e| format!("N = {n}: {e}"))?;
        let s = lattice_stats(&p);
        ensure!(
            (s.i, s.b, s.k.clone(), s.area_k.clone()) == (1, 8, BigInt::from(3), BigInt::from(n)),
            "N = {n}: wrong stats"
        );
    }
    let ms = start.elapsed().as_millis();
    ensure!(ms < 1000, "took {ms} ms");
    Ok(format!("N = 69..=91 in {ms} ms"))
}

fn structural(cs: &Censuses) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5EED);
    for n in 0..500 {
        let p = common::random_polygon(&mut rng, 1 + (n % 3) as i64, 2);
        let c = canonical_form(&p);
        ensure!(canonical_form(&c) == c, "canonical form not idempotent");
        for _ in 0..100 {
            let q = apply_map(&p, &common::random_map(&mut rng));
            ensure!(canonical_form(&q) == c, "canonical form not invariant");
        }
    }
    let bx = verify::half_integral_box(1).unwrap();
    let seq = enumerate_with(&bx, &EnumerationConfig { budget: None, parallelism: Parallelism::Sequential }).unwrap();
    let par =
        enumerate_with(&bx, &EnumerationConfig { budget: None, parallelism: Parallelism::Parallel(Some(4)) }).unwrap();
    ensure!(seq.classes == par.classes && seq.nodes == par.nodes, "1 and 4 threads differ");
    let mut grown = Vec::new();
    for (k, i) in [(2, 1), (2, 2), (3, 1)] {
        let base = if k == 2 { cs.half(i) } else { cs.exact(k, i) };
        let big = run(base.bx.grown(2));
        ensure!(
            big.complete() && big.classes() == base.classes(),
            "({k},{i}): grown box has {} classes vs {}",
            big.classes().len(),
            base.classes().len()
        );
        grown.push(format!("({k},{i}) {}", big.classes().len()));
    }
    Ok(format!(
        "500 polygons x 100 maps; determinism over {} classes; saturated {}",
        seq.classes.len(),
        grown.join(", ")
    ))
}

fn main() -> ExitCode {
    let picked: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let cs = Censuses::default();
    let criteria: [(u32, &str, &dyn Fn() -> Outcome); 9] = [
        (1, "Scott generalization", &|| scott(&cs)),
        (2, "lower area bound", &|| area_lower(&cs)),
        (3, "upper area bound", &|| area_upper(&cs)),
        (4, "half-integral bound", &|| half_integral(&cs)),
        (5, "Ehrhart identities", &ehrhart),
        (6, "b(2P) bound", &|| b2p(&cs)),
        (7, "quasipolynomial count", &|| conjecture(&cs)),
        (8, "intermediate areas", &intermediate),
        (9, "structural properties", &|| structural(&cs)),
    ];
    let mut failed = 0;
    for (n, name, check) in criteria {
        if !picked.is_empty() && !picked.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {n} ({name}): PASS [{secs:.1}s] {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL [{secs:.1}s] {msg}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
