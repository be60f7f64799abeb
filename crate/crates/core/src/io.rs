//! Polygon file format: `{"vertices": [["p/q", "p/q"], ...]}` with exact
//! fractions in lowest terms.

use std::path::Path;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, parse_rational, Point, Polygon};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonFile {
    pub vertices: Vec<[String; 2]>,
}

impl PolygonFile {
    pub fn from_polygon(p: &Polygon) -> Self {
        Self { vertices: p.vertices().iter().map(|v| [fmt_rational(&v.x), fmt_rational(&v.y)]).collect() }
    }

    /// Vertices may be listed in any order; they must be in convex position.
    pub fn to_polygon(&self) -> Result<Polygon> {
        let pts = self
            .vertices
            .iter()
            .map(|[x, y]| Ok(Point::new(parse_rational(x)?, parse_rational(y)?)))
            .collect::<Result<Vec<_>>>()?;
        let n = pts.len();
        let p = Polygon::hull_of(pts)?;
        if p.len() != n {
            return Err(Error::InvalidPolygon(format!(
                "{n} points listed but only {} are vertices of their hull",
                p.len()
            )));
        }
        Ok(p)
    }
}

pub fn parse_polygon(text: &str) -> Result<Polygon> {
    let f: PolygonFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    f.to_polygon()
}

pub fn polygon_to_json(p: &Polygon) -> String {
    serde_json::to_string(&PolygonFile::from_polygon(p)).expect("strings serialize")
}

pub fn read_polygon(path: &Path) -> Result<Polygon> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_polygon(&text)
}

pub fn write_polygon(path: &Path, p: &Polygon) -> std::io::Result<()> {
    let mut s = serde_json::to_string_pretty(&PolygonFile::from_polygon(p)).expect("strings serialize");
    s.push('\n');
    std::fs::write(path, s)
}

/// Serde adapter writing a polygon in file format.
pub fn serialize_polygon<S: Serializer>(p: &Polygon, s: S) -> std::result::Result<S::Ok, S::Error> {
    PolygonFile::from_polygon(p).serialize(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let p = crate::extremal::scott_maximizer(3, 1).unwrap();
        let text = polygon_to_json(&p);
        assert_eq!(text, r#"{"vertices":[["0","-1"],["8","-1"],["0","1/3"]]}"#);
        assert_eq!(parse_polygon(&text).unwrap(), p);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_polygon(r#"{"vertices":[["3/0","0"]]}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_polygon(r#"{"vertices":[["2/4","0"]]}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_polygon("[1,2]"), Err(Error::Parse(_))));
        let inner = r#"{"vertices":[["0","0"],["2","0"],["0","2"],["1/2","1/2"]]}"#;
        assert!(matches!(parse_polygon(inner), Err(Error::InvalidPolygon(_))));
    }
}
