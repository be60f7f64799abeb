//! Exact toolkit for rational polygons: lattice-point statistics, normalized
//! areas, unimodular canonical forms, extremal families, Ehrhart
//! quasipolynomials and exhaustive desk-scale enumeration.

pub mod ehrhart;
pub mod enumerate;
pub mod error;
pub mod exact;
pub mod extremal;
pub mod grid;
pub mod io;
pub mod lattice;
pub mod render;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{convex_hull, denominator, normalized_area, polygon_area, Hull, Point, Polygon, Rational};
