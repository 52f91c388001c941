//! Correcting factor of a polygon with respect to a line, and its V-shaped
//! profile over parallel translates of the line.
//!
//! For a line `q` with unit normal `n` and the polygon centroid `S`, let
//! `d = n·S − b` be the signed distance of the centroid from `q`. The
//! homothety image `H_c(P)` spans offsets `[n·S − c·w(−n), n·S + c·w(n)]`
//! along `n`, so `q` is tangent to `H_c(P)` exactly when
//! `c = −d / w(n)` (line on the `+n` side) or `c = d / w(−n)` (line on the
//! `−n` side). The factor is zero when the line passes through `S`.

use std::fmt;

use crate::geom::{ConvexPolygon, Direction, Line, Point};

/// Side of a line on which a polygon's centroid lies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Negative = -1,
    On = 0,
    Positive = 1,
}

impl Side {
    pub fn value(self) -> i8 {
        self as i8
    }

    pub fn from_value(v: i64) -> Option<Side> {
        match v {
            -1 => Some(Side::Negative),
            0 => Some(Side::On),
            1 => Some(Side::Positive),
            _ => None,
        }
    }

    pub fn flipped(self) -> Side {
        match self {
            Side::Negative => Side::Positive,
            Side::On => Side::On,
            Side::Positive => Side::Negative,
        }
    }
}

/// How a tangent line touches a polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Contact {
    Vertex,
    Edge,
    None,
}

impl Contact {
    pub fn as_str(self) -> &'static str {
        match self {
            Contact::Vertex => "vertex",
            Contact::Edge => "edge",
            Contact::None => "none",
        }
    }

    pub fn parse(s: &str) -> Option<Contact> {
        match s {
            "vertex" => Some(Contact::Vertex),
            "edge" => Some(Contact::Edge),
            "none" => Some(Contact::None),
            _ => None,
        }
    }
}

impl fmt::Display for Contact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The factor as a function of line offset at a fixed direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VShapeProfile {
    pub direction: Direction,
    /// Offset of the parallel line through the centroid.
    pub apex_offset: f64,
    /// `1 / w(n)`: growth rate for offsets above the apex.
    pub slope_pos: f64,
    /// `1 / w(−n)`: growth rate for offsets below the apex.
    pub slope_neg: f64,
}

impl VShapeProfile {
    pub fn eval(&self, offset: f64) -> f64 {
        let t = offset - self.apex_offset;
        if t > 0.0 {
            t * self.slope_pos
        } else if t < 0.0 {
            -t * self.slope_neg
        } else {
            0.0
        }
    }
}

/// Smallest `c ≥ 0` for which `line` is tangent to `H_c(polygon)`; zero when
/// the line passes through the centroid. Defined for every line, including
/// ones that miss the polygon (factor above 1).
pub fn correcting_factor(polygon: &ConvexPolygon, line: &Line) -> f64 {
    let n = line.normal();
    let d = line.signed_distance(polygon.centroid());
    if d < 0.0 {
        // Line lies on the +n side of the centroid.
        -d / polygon.support_value(n)
    } else if d > 0.0 {
        d / polygon.support_value(-n)
    } else {
        0.0
    }
}

pub fn factor_profile(polygon: &ConvexPolygon, direction: Direction) -> VShapeProfile {
    let n = direction.normal();
    VShapeProfile {
        direction,
        apex_offset: n.dot(polygon.centroid()),
        slope_pos: 1.0 / polygon.support_value(n),
        slope_neg: 1.0 / polygon.support_value(-n),
    }
}

pub fn side_of(polygon: &ConvexPolygon, line: &Line, tol: f64) -> Side {
    let d = line.signed_distance(polygon.centroid());
    if d.abs() <= tol {
        Side::On
    } else if d > 0.0 {
        Side::Positive
    } else {
        Side::Negative
    }
}

/// Whether `line` supports `polygon` within `tol`, and the kind of contact.
pub fn is_tangent(polygon: &ConvexPolygon, line: &Line, tol: f64) -> (bool, Contact) {
    let dist: Vec<f64> = polygon
        .vertices()
        .iter()
        .map(|&v| line.signed_distance(v))
        .collect();
    let min_abs = dist.iter().fold(f64::INFINITY, |m, d| m.min(d.abs()));
    let one_side = dist.iter().all(|&d| d >= -tol) || dist.iter().all(|&d| d <= tol);
    if min_abs > tol || !one_side {
        return (false, Contact::None);
    }
    let n = dist.len();
    let near: Vec<bool> = dist.iter().map(|d| d.abs() <= tol).collect();
    let adjacent_pair = (0..n).any(|i| near[i] && near[(i + 1) % n]);
    let contact = if adjacent_pair {
        Contact::Edge
    } else {
        Contact::Vertex
    };
    (true, contact)
}

/// Default tangency tolerance: `1e-9` times the largest absolute coordinate
/// (floored at 1).
pub fn default_tangency_tol(polygon: &ConvexPolygon) -> f64 {
    1e-9 * polygon.max_abs_coordinate().max(1.0)
}

/// Tolerance on point-to-line distance equivalent to a relative factor
/// residual `rel` at factor level `c`.
pub(crate) fn factor_tol_to_distance(polygon: &ConvexPolygon, n: Point, c: f64, rel: f64) -> f64 {
    let w = polygon.support_value(n).max(polygon.support_value(-n));
    rel * c.max(1.0) * w
}
