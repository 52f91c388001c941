//! Planar primitives: points, canonical unoriented lines, convex polygons
//! and homotheties about the vertex centroid.
//!
//! The centroid used throughout this crate is the **vertex mean** (the
//! arithmetic mean of the vertex coordinates), not the area centroid. All
//! homotheties are centered there.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Two input vertices closer than this are rejected as duplicates.
pub const DUPLICATE_VERTEX_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("polygon needs at least 3 distinct non-collinear vertices, found {0}")]
    TooFewVertices(usize),
    #[error("vertices {first} and {second} coincide")]
    DuplicateVertex { first: usize, second: usize },
    #[error("polygon is not convex at vertex {0}")]
    NotConvex(usize),
    #[error("non-finite coordinate at vertex {0}")]
    NonFinite(usize),
    #[error("homothety ratio must be non-negative, got {0}")]
    NegativeRatio(f64),
    #[error("polygon scaling ratio must be positive, got {0}")]
    ZeroRatio(f64),
    #[error("configuration has no polygons")]
    EmptyConfiguration,
    #[error("a line needs two distinct points")]
    DegenerateLine,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product; positive for a CCW turn.
    #[inline]
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Rotation by +90 degrees.
    #[inline]
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<Point> for f64 {
    type Output = Point;
    fn mul(self, p: Point) -> Point {
        Point::new(self * p.x, self * p.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Normal angle of an unoriented line, kept in `[0, π)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Direction(f64);

impl Direction {
    /// Reduces `theta` modulo π. Use [`Line::from_angle`] when an offset
    /// must follow the reduction.
    pub fn new(theta: f64) -> Self {
        Direction(reduce_angle(theta).0)
    }

    #[inline]
    pub fn theta(self) -> f64 {
        self.0
    }

    /// Unit normal `(cos θ, sin θ)`.
    #[inline]
    pub fn normal(self) -> Point {
        let (s, c) = self.0.sin_cos();
        Point::new(c, s)
    }
}

/// Returns the angle reduced to `[0, π)` and whether an odd number of
/// half-turns was removed (which flips the normal).
fn reduce_angle(theta: f64) -> (f64, bool) {
    let k = (theta / PI).floor();
    let mut reduced = theta - k * PI;
    let mut flipped = (k as i64).rem_euclid(2) == 1;
    if reduced >= PI {
        reduced -= PI;
        flipped = !flipped;
    }
    if reduced < 0.0 {
        reduced = 0.0;
    }
    (reduced, flipped)
}

/// Unoriented line `{x : n(θ)·x = offset}` with θ in `[0, π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    direction: Direction,
    offset: f64,
}

impl Line {
    pub fn new(direction: Direction, offset: f64) -> Self {
        Line { direction, offset }
    }

    /// Line with normal angle `theta` (any real) and offset `b`, canonicalized
    /// so that the stored angle lies in `[0, π)`.
    pub fn from_angle(theta: f64, b: f64) -> Self {
        let (reduced, flipped) = reduce_angle(theta);
        Line {
            direction: Direction(reduced),
            offset: if flipped { -b } else { b },
        }
    }

    /// Line `a·x + b·y = c`.
    pub fn from_implicit(a: f64, b: f64, c: f64) -> Result<Self, GeomError> {
        let norm = a.hypot(b);
        if norm == 0.0 || !norm.is_finite() {
            return Err(GeomError::DegenerateLine);
        }
        Ok(Line::from_angle(b.atan2(a), c / norm))
    }

    pub fn through(p: Point, q: Point) -> Result<Self, GeomError> {
        let d = q - p;
        if d.norm() == 0.0 {
            return Err(GeomError::DegenerateLine);
        }
        let n = d.perp();
        let theta = n.y.atan2(n.x);
        let (s, c) = theta.sin_cos();
        let unit = Point::new(c, s);
        // Average both points so the offset error is symmetric.
        let b = 0.5 * (unit.dot(p) + unit.dot(q));
        Ok(Line::from_angle(theta, b))
    }

    #[inline]
    pub fn direction(&self) -> Direction {
        self.direction
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.direction.theta()
    }

    #[inline]
    pub fn offset(&self) -> f64 {
        self.offset
    }

    #[inline]
    pub fn normal(&self) -> Point {
        self.direction.normal()
    }

    /// Coefficients `(a, b, c)` of `a·x + b·y = c` with `(a, b)` the unit normal.
    pub fn implicit(&self) -> (f64, f64, f64) {
        let n = self.normal();
        (n.x, n.y, self.offset)
    }

    /// `n·p − offset`. Its absolute value is the Euclidean distance.
    #[inline]
    pub fn signed_distance(&self, p: Point) -> f64 {
        self.normal().dot(p) - self.offset
    }
}

/// `S + c (X − S)`.
pub fn apply_homothety(p: Point, center: Point, c: f64) -> Result<Point, GeomError> {
    if c.is_nan() || c < 0.0 {
        return Err(GeomError::NegativeRatio(c));
    }
    Ok(homothety(p, center, c))
}

#[inline]
fn homothety(p: Point, center: Point, c: f64) -> Point {
    center + c * (p - center)
}

fn vertex_mean(vertices: &[Point]) -> Point {
    let inv = 1.0 / vertices.len() as f64;
    let (sx, sy) = vertices
        .iter()
        .fold((0.0, 0.0), |(sx, sy), v| (sx + v.x, sy + v.y));
    Point::new(sx * inv, sy * inv)
}

fn signed_area2(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| vertices[i].cross(vertices[(i + 1) % n]))
        .sum()
}

/// Strictly convex polygon with counterclockwise vertices and a cached
/// vertex-mean centroid.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
    centroid: Point,
}

impl ConvexPolygon {
    /// Validates and canonicalizes a vertex list.
    ///
    /// Clockwise input is reversed. Vertices lying on the segment between
    /// their neighbours are dropped. Error indices refer to positions in
    /// `raw`.
    pub fn new(raw: Vec<Point>) -> Result<Self, GeomError> {
        if let Some(i) = raw.iter().position(|p| !p.is_finite()) {
            return Err(GeomError::NonFinite(i));
        }
        if raw.len() < 3 {
            return Err(GeomError::TooFewVertices(raw.len()));
        }
        for i in 0..raw.len() {
            for j in i + 1..raw.len() {
                if raw[i].distance(raw[j]) <= DUPLICATE_VERTEX_TOL {
                    return Err(GeomError::DuplicateVertex {
                        first: i,
                        second: j,
                    });
                }
            }
        }

        let mut ring: Vec<(usize, Point)> = raw.into_iter().enumerate().collect();
        let pts: Vec<Point> = ring.iter().map(|&(_, p)| p).collect();
        if signed_area2(&pts) < 0.0 {
            ring.reverse();
        }

        // Drop forward-collinear vertices until none remain.
        loop {
            let n = ring.len();
            if n < 3 {
                return Err(GeomError::TooFewVertices(n));
            }
            let dropped = (0..n).find(|&i| {
                let prev = ring[(i + n - 1) % n].1;
                let cur = ring[i].1;
                let next = ring[(i + 1) % n].1;
                let (a, b) = (cur - prev, next - cur);
                a.cross(b) == 0.0 && a.dot(b) > 0.0
            });
            match dropped {
                Some(i) => {
                    ring.remove(i);
                }
                None => break,
            }
        }

        let n = ring.len();
        let mut turning = 0.0;
        for i in 0..n {
            let prev = ring[(i + n - 1) % n].1;
            let (idx, cur) = ring[i];
            let next = ring[(i + 1) % n].1;
            let (a, b) = (cur - prev, next - cur);
            let cross = a.cross(b);
            if cross <= 0.0 {
                return Err(GeomError::NotConvex(idx));
            }
            turning += cross.atan2(a.dot(b));
        }
        // Star polygons turn left everywhere but wind more than once.
        if turning > 3.0 * PI {
            return Err(GeomError::NotConvex(ring[0].0));
        }

        let vertices: Vec<Point> = ring.into_iter().map(|(_, p)| p).collect();
        let centroid = vertex_mean(&vertices);
        Ok(ConvexPolygon { vertices, centroid })
    }

    #[inline]
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    #[inline]
    pub fn centroid(&self) -> Point {
        self.centroid
    }

    pub fn area(&self) -> f64 {
        0.5 * signed_area2(&self.vertices)
    }

    /// Support value relative to the centroid: `max_v n·(v − S)`.
    ///
    /// This is the half-width of the minimal strip of lines with normal `n`
    /// on the `n` side of the centroid.
    pub fn support_value(&self, n: Point) -> f64 {
        self.support_vertex(n).1
    }

    /// Index of a maximizing vertex together with the support value.
    /// Ties resolve to the lowest index.
    pub fn support_vertex(&self, n: Point) -> (usize, f64) {
        let s = self.centroid;
        let mut best = (0, f64::NEG_INFINITY);
        for (i, v) in self.vertices.iter().enumerate() {
            let h = n.dot(*v - s);
            if h > best.1 {
                best = (i, h);
            }
        }
        best
    }

    /// Image under the homothety with ratio `c` about the centroid.
    pub fn scaled(&self, c: f64) -> Result<ConvexPolygon, GeomError> {
        if c.is_nan() || c < 0.0 {
            return Err(GeomError::NegativeRatio(c));
        }
        if c == 0.0 || !c.is_finite() {
            return Err(GeomError::ZeroRatio(c));
        }
        let s = self.centroid;
        let vertices: Vec<Point> = self.vertices.iter().map(|&v| homothety(v, s, c)).collect();
        let centroid = vertex_mean(&vertices);
        Ok(ConvexPolygon { vertices, centroid })
    }

    /// Applies an arbitrary point map and re-validates the result.
    pub fn map_points(&self, f: impl Fn(Point) -> Point) -> Result<ConvexPolygon, GeomError> {
        ConvexPolygon::new(self.vertices.iter().map(|&v| f(v)).collect())
    }

    pub fn max_abs_coordinate(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.x.abs().max(v.y.abs()))
            .fold(0.0, f64::max)
    }
}

/// Ordered, non-empty system of convex polygons. Indices are stable.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    polygons: Vec<ConvexPolygon>,
}

impl Configuration {
    pub fn new(polygons: Vec<ConvexPolygon>) -> Result<Self, GeomError> {
        if polygons.is_empty() {
            return Err(GeomError::EmptyConfiguration);
        }
        Ok(Configuration { polygons })
    }

    #[inline]
    pub fn polygons(&self) -> &[ConvexPolygon] {
        &self.polygons
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.polygons.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.polygons.is_empty()
    }

    pub fn centroids(&self) -> Vec<Point> {
        self.polygons.iter().map(ConvexPolygon::centroid).collect()
    }

    /// Largest absolute vertex coordinate, floored at 1 so that tolerances
    /// derived from it never vanish.
    pub fn scale(&self) -> f64 {
        self.polygons
            .iter()
            .map(ConvexPolygon::max_abs_coordinate)
            .fold(1.0, f64::max)
    }

    /// Every polygon scaled by `c` about its own centroid.
    pub fn scaled(&self, c: f64) -> Result<Configuration, GeomError> {
        let polygons = self
            .polygons
            .iter()
            .map(|p| p.scaled(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Configuration { polygons })
    }

    pub fn map_points(&self, f: impl Fn(Point) -> Point) -> Result<Configuration, GeomError> {
        let polygons = self
            .polygons
            .iter()
            .map(|p| p.map_points(&f))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Configuration { polygons })
    }

    /// Bounding box `(min, max)` over all vertices.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in self.polygons.iter().flat_map(|p| p.vertices()) {
            lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        (lo, hi)
    }
}

/// Scales every polygon of `config` by `c` about its centroid.
pub fn scale_configuration(config: &Configuration, c: f64) -> Result<Configuration, GeomError> {
    config.scaled(c)
}
