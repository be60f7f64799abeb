//! Deterministic SVG figures: one row per boundary count `b`, each
//! polygon drawn over a unit grid and a fine `1/k` grid.

use std::collections::BTreeMap;
use std::fmt::Write;

use num::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exact::{Polygon, Rational};
use crate::io::PolygonFile;
use crate::lattice::lattice_stats;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FigureItem {
    #[serde(flatten)]
    pub polygon: PolygonFile,
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FigureSpec {
    pub polygons: Vec<FigureItem>,
    /// fine grid step `1/k`; defaults to the largest denominator
    #[serde(default)]
    pub k: Option<u64>,
}

impl FigureSpec {
    pub fn from_polygons<'a>(items: impl IntoIterator<Item = (&'a Polygon, Option<String>)>) -> Self {
        let polygons =
            items.into_iter().map(|(p, label)| FigureItem { polygon: PolygonFile::from_polygon(p), label }).collect();
        Self { polygons, k: None }
    }
}

const UNIT: f64 = 40.0;
const PAD: f64 = 0.5;
const LABEL_W: f64 = 60.0;
const CAPTION_H: f64 = 16.0;

struct Cell {
    poly: Polygon,
    label: Option<String>,
    lo: (f64, f64),
    hi: (f64, f64),
}

fn f(r: &Rational) -> f64 {
    r.to_f64().expect("finite")
}

fn num(x: f64) -> String {
    // fixed precision keeps the output byte-deterministic
    let s = format!("{x:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

pub fn render_svg(spec: &FigureSpec) -> Result<String> {
    let mut rows: BTreeMap<u64, Vec<Cell>> = BTreeMap::new();
    let mut k_max = 1u64;
    for item in &spec.polygons {
        let poly = item.polygon.to_polygon()?;
        let s = lattice_stats(&poly);
        k_max = k_max.max(s.k.to_u64().unwrap_or(1));
        let xs: Vec<f64> = poly.vertices().iter().map(|v| f(&v.x)).collect();
        let ys: Vec<f64> = poly.vertices().iter().map(|v| f(&v.y)).collect();
        let lo =
            (xs.iter().cloned().fold(f64::MAX, f64::min).floor(), ys.iter().cloned().fold(f64::MAX, f64::min).floor());
        let hi =
            (xs.iter().cloned().fold(f64::MIN, f64::max).ceil(), ys.iter().cloned().fold(f64::MIN, f64::max).ceil());
        rows.entry(s.b).or_default().push(Cell { poly, label: item.label.clone(), lo, hi });
    }
    let k = spec.k.unwrap_or(k_max).max(1);

    // rows top to bottom by decreasing b
    let row_list: Vec<(u64, Vec<Cell>)> = rows.into_iter().rev().collect();
    let mut width: f64 = LABEL_W;
    let mut height: f64 = 0.0;
    let mut heights = Vec::new();
    for (_, cells) in &row_list {
        let w: f64 = cells.iter().map(|c| (c.hi.0 - c.lo.0 + 2.0 * PAD) * UNIT).sum();
        let h = cells.iter().map(|c| (c.hi.1 - c.lo.1 + 2.0 * PAD) * UNIT).fold(0.0, f64::max) + CAPTION_H;
        width = width.max(LABEL_W + w);
        heights.push(h);
        height += h;
    }

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(width),
        num(height),
        num(width),
        num(height)
    )
    .expect("string write");
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let mut y_off = 0.0;
    for ((b, cells), h) in row_list.iter().zip(&heights) {
        writeln!(
            out,
            r#"<text x="8" y="{}" font-family="sans-serif" font-size="14">b = {b}</text>"#,
            num(y_off + h / 2.0)
        )
        .expect("string write");
        let mut x_off = LABEL_W;
        for c in cells {
            draw_cell(&mut out, c, k, x_off, y_off);
            x_off += (c.hi.0 - c.lo.0 + 2.0 * PAD) * UNIT;
        }
        y_off += h;
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn draw_cell(out: &mut String, c: &Cell, k: u64, x_off: f64, y_off: f64) {
    let top = c.hi.1 + PAD;
    let left = c.lo.0 - PAD;
    let sx = |x: f64| x_off + (x - left) * UNIT;
    let sy = |y: f64| y_off + (top - y) * UNIT;
    out.push_str("<g>\n");
    // fine grid, then the unit grid on top
    let kf = k as f64;
    for (step, stroke, w) in [(1.0 / kf, "#e4e4e4", 0.5), (1.0, "#b0b0b0", 1.0)] {
        if step < 1.0 && k == 1 {
            continue;
        }
        let n_x = ((c.hi.0 - c.lo.0) / step).round() as i64;
        for j in 0..=n_x {
            let x = c.lo.0 + j as f64 * step;
            writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="{w}"/>"#,
                num(sx(x)),
                num(sy(c.lo.1)),
                num(sx(x)),
                num(sy(c.hi.1))
            )
            .expect("string write");
        }
        let n_y = ((c.hi.1 - c.lo.1) / step).round() as i64;
        for j in 0..=n_y {
            let y = c.lo.1 + j as f64 * step;
            writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="{w}"/>"#,
                num(sx(c.lo.0)),
                num(sy(y)),
                num(sx(c.hi.0)),
                num(sy(y))
            )
            .expect("string write");
        }
    }
    let pts: Vec<String> =
        c.poly.vertices().iter().map(|v| format!("{},{}", num(sx(f(&v.x))), num(sy(f(&v.y))))).collect();
    writeln!(
        out,
        r##"<polygon points="{}" fill="#7aa6d6" fill-opacity="0.6" stroke="#1f4e85" stroke-width="1.5"/>"##,
        pts.join(" ")
    )
    .expect("string write");
    // lattice points: filled inside the polygon, hollow outside
    for x in c.lo.0 as i64..=c.hi.0 as i64 {
        for y in c.lo.1 as i64..=c.hi.1 as i64 {
            let p = crate::exact::Point::ints(x, y);
            let fill = if c.poly.contains(&p) { "black" } else { "none" };
            writeln!(
                out,
                r#"<circle cx="{}" cy="{}" r="2.5" fill="{fill}" stroke="black" stroke-width="0.8"/>"#,
                num(sx(x as f64)),
                num(sy(y as f64))
            )
            .expect("string write");
        }
    }
    for v in c.poly.vertices() {
        writeln!(out, r##"<circle cx="{}" cy="{}" r="3" fill="#c0392b"/>"##, num(sx(f(&v.x))), num(sy(f(&v.y))))
            .expect("string write");
    }
    if let Some(label) = &c.label {
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="9">{}</text>"#,
            num(sx(c.lo.0)),
            num(sy(c.lo.1 - PAD) + CAPTION_H - 4.0),
            escape(label)
        )
        .expect("string write");
    }
    out.push_str("</g>\n");
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{area_minimizers, HullDim};

    #[test]
    fn empty_spec_is_a_valid_canvas() {
        let svg = render_svg(&FigureSpec::default()).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(!svg.contains("<polygon"));
    }

    #[test]
    fn single_polygon_has_one_shape_and_vertex_dots() {
        let p = crate::extremal::scott_maximizer(3, 1).unwrap();
        let svg = render_svg(&FigureSpec::from_polygons([(&p, Some("scott".into()))])).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert_eq!(svg.matches("fill=\"#c0392b\"").count(), 3);
        assert!(svg.contains("b = 11"));
    }

    #[test]
    fn output_is_deterministic_with_rows_by_b() {
        let mut items = Vec::new();
        for b in 2..=4 {
            for m in area_minimizers(3, 1, b, HullDim::Two).unwrap() {
                items.push((m.polygon, Some(m.id.to_string())));
            }
        }
        let spec = FigureSpec::from_polygons(items.iter().map(|(p, l)| (p, l.clone())));
        let a = render_svg(&spec).unwrap();
        assert_eq!(a, render_svg(&spec).unwrap());
        let rows: Vec<usize> = (2..=4).map(|b| a.find(&format!("b = {b}<")).unwrap()).collect();
        assert!(rows[2] < rows[1] && rows[1] < rows[0]);
    }
}
