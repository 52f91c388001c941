//! Minimal expansion ratio and optimal transversals.
//!
//! For a fixed normal `n`, a line `n·x = b` meets `H_c(P_i)` iff
//! `b ∈ [n·S_i − c·w_i(−n), n·S_i + c·w_i(n)]`. All intervals share a point
//! iff for every ordered pair `(i, j)`
//!
//! ```text
//! n·(S_i − S_j) ≤ c · (w_i(−n) + w_j(n))
//! ```
//!
//! so the smallest feasible ratio at that direction is the largest pairwise
//! quotient, clamped at zero. The outer problem minimizes this envelope over
//! the normal angle with a uniform grid, golden-section refinement of each
//! grid-local minimum, and a closed-form polish at the crossing of the two
//! active pair quotients.

use std::cmp::Ordering;
use std::f64::consts::PI;

use thiserror::Error;

use crate::factor::{self, correcting_factor, is_tangent, side_of, Contact, Side};
use crate::geom::{Configuration, Direction, GeomError, Line, Point};

/// Angular distance under which two optimal lines are treated as the same.
pub const LINE_DEDUP_ANGLE: f64 = 1e-6;

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const ACTIVE_PAIR_REL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("configuration has no polygons")]
    EmptyConfiguration,
    #[error("invalid solver option: {0}")]
    InvalidOptions(String),
    #[error("certificate invalid: {0}")]
    CertificateInvalid(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    /// Number of uniformly spaced normal angles in `[0, π)`.
    pub grid_size: usize,
    /// Final bracket width of the angular refinement, radians.
    pub angle_tol: f64,
    /// Relative tolerance under which distinct local optima count as ties.
    pub value_tol: f64,
    /// Collinearity threshold for centroids, relative to the configuration scale.
    pub collinear_tol: f64,
    /// Relative factor residual under which a polygon counts as tangent.
    pub certificate_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            grid_size: 4096,
            angle_tol: 1e-10,
            value_tol: 1e-7,
            collinear_tol: 1e-9,
            certificate_tol: 1e-7,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<(), SolveError> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(SolveError::InvalidOptions(format!("{name} must be positive, got {v}")))
            }
        };
        if self.grid_size < 3 {
            return Err(SolveError::InvalidOptions(format!(
                "grid_size must be at least 3, got {}",
                self.grid_size
            )));
        }
        positive("angle_tol", self.angle_tol)?;
        positive("value_tol", self.value_tol)?;
        positive("collinear_tol", self.collinear_tol)?;
        positive("certificate_tol", self.certificate_tol)
    }
}

/// A binding pair at a directional optimum. At the optimal offset the upper
/// end of `below`'s projection interval meets the lower end of `above`'s, so
/// the line separates their centroids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActivePair {
    /// Polygon whose centroid projects lower along the normal.
    pub below: usize,
    /// Polygon whose centroid projects higher along the normal.
    pub above: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirectionalOptimum {
    pub direction: Direction,
    pub c_star: f64,
    pub offset: f64,
    pub feasible_width: f64,
    pub active_pairs: Vec<ActivePair>,
}

impl DirectionalOptimum {
    pub fn line(&self) -> Line {
        Line::new(self.direction, self.offset)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OffsetInterval {
    pub lo: f64,
    pub hi: f64,
}

impl OffsetInterval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    /// No transversal exists for the unscaled system.
    InitialConfiguration,
    HasTransversal,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::InitialConfiguration => "initial_configuration",
            Classification::HasTransversal => "has_transversal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "initial_configuration" => Some(Classification::InitialConfiguration),
            "has_transversal" => Some(Classification::HasTransversal),
            _ => None,
        }
    }
}

/// Witness that a line is optimal: at least three polygons of the scaled
/// system touch it, with centroids on both sides.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub tangent_indices: Vec<usize>,
    pub contacts: Vec<Contact>,
    pub sides: Vec<Side>,
    pub residuals: Vec<f64>,
}

impl Certificate {
    pub fn is_valid(&self) -> bool {
        self.problem().is_none()
    }

    fn problem(&self) -> Option<String> {
        if self.tangent_indices.len() < 3 {
            return Some(format!(
                "{} tangent polygon(s), need at least 3",
                self.tangent_indices.len()
            ));
        }
        let neg = self.sides.contains(&Side::Negative);
        let pos = self.sides.contains(&Side::Positive);
        if !(neg && pos) {
            return Some("all tangent polygons lie in one halfplane".into());
        }
        if let Some(k) = self.contacts.iter().position(|c| *c == Contact::None) {
            return Some(format!(
                "polygon {} has no geometric contact with the line",
                self.tangent_indices[k]
            ));
        }
        None
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub grid_size: usize,
    /// Golden-section iterations summed over all refined brackets.
    pub refinement_iterations: usize,
    /// Largest final bracket width over all refined brackets.
    pub bracket_width: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub c_m: f64,
    pub lines: Vec<Line>,
    /// One per line; empty for degenerate instances.
    pub certificates: Vec<Certificate>,
    pub degenerate: bool,
    pub classification: Classification,
    pub diagnostics: Diagnostics,
}

impl Solution {
    pub fn all_certificates_valid(&self) -> bool {
        self.certificates.len() == self.lines.len()
            && self.certificates.iter().all(Certificate::is_valid)
    }
}

/// Projections and centroid-relative support data at one normal.
struct Supports {
    proj: Vec<f64>,
    /// `(vertex index, w_i(n))`
    up: Vec<(usize, f64)>,
    /// `(vertex index, w_i(−n))`
    down: Vec<(usize, f64)>,
}

impl Supports {
    fn at(config: &Configuration, n: Point) -> Self {
        let polys = config.polygons();
        Supports {
            proj: polys.iter().map(|p| n.dot(p.centroid())).collect(),
            up: polys.iter().map(|p| p.support_vertex(n)).collect(),
            down: polys.iter().map(|p| p.support_vertex(-n)).collect(),
        }
    }

    /// Quotient for the ordered pair (`above`, `below`).
    #[inline]
    fn quotient(&self, above: usize, below: usize) -> f64 {
        (self.proj[above] - self.proj[below]) / (self.down[above].1 + self.up[below].1)
    }

    /// Largest pairwise quotient (clamped at 0) and its maximizing pair.
    fn envelope(&self) -> (f64, Option<ActivePair>) {
        let n = self.proj.len();
        let mut best = (0.0, None);
        for above in 0..n {
            for below in 0..n {
                if above == below {
                    continue;
                }
                let q = self.quotient(above, below);
                if q > best.0 {
                    best = (q, Some(ActivePair { below, above }));
                }
            }
        }
        best
    }

    fn interval(&self, c: f64) -> (f64, f64) {
        let lo = (0..self.proj.len())
            .map(|i| self.proj[i] - c * self.down[i].1)
            .fold(f64::NEG_INFINITY, f64::max);
        let hi = (0..self.proj.len())
            .map(|i| self.proj[i] + c * self.up[i].1)
            .fold(f64::INFINITY, f64::min);
        (lo, hi)
    }
}

#[inline]
fn unit(theta: f64) -> Point {
    let (s, c) = theta.sin_cos();
    Point::new(c, s)
}

/// Envelope value at an arbitrary (unreduced) angle.
fn envelope_at(config: &Configuration, theta: f64) -> f64 {
    Supports::at(config, unit(theta)).envelope().0
}

/// Offsets `b` for which `n·x = b` meets every polygon of the system scaled
/// by `c`, or `None` when the projections have no common point.
pub fn feasible_offset_interval(
    config: &Configuration,
    c: f64,
    direction: Direction,
) -> Option<OffsetInterval> {
    let (lo, hi) = Supports::at(config, direction.normal()).interval(c);
    (lo <= hi).then_some(OffsetInterval { lo, hi })
}

/// Exact minimal ratio over all offsets at a fixed direction.
pub fn min_c_for_direction(config: &Configuration, direction: Direction) -> DirectionalOptimum {
    let sup = Supports::at(config, direction.normal());
    let (c_star, _) = sup.envelope();
    let n = sup.proj.len();
    let mut active_pairs = Vec::new();
    if c_star > 0.0 {
        let floor = c_star * (1.0 - ACTIVE_PAIR_REL);
        for above in 0..n {
            for below in 0..n {
                if above != below && sup.quotient(above, below) >= floor {
                    active_pairs.push(ActivePair { below, above });
                }
            }
        }
        active_pairs.sort();
    }
    let (lo, hi) = sup.interval(c_star);
    DirectionalOptimum {
        direction,
        c_star,
        offset: 0.5 * (lo + hi),
        feasible_width: (hi - lo).max(0.0),
        active_pairs,
    }
}

/// Principal-axis line through the centroids and the largest centroid
/// distance from it.
fn centroid_axis(centroids: &[Point]) -> (Line, f64) {
    let m = {
        let inv = 1.0 / centroids.len() as f64;
        let (sx, sy) = centroids
            .iter()
            .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
        Point::new(sx * inv, sy * inv)
    };
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in centroids {
        let d = *p - m;
        sxx += d.x * d.x;
        sxy += d.x * d.y;
        syy += d.y * d.y;
    }
    let axis = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let normal_angle = axis + 0.5 * PI;
    let n = unit(normal_angle);
    let line = Line::from_angle(normal_angle, n.dot(m));
    let dev = centroids
        .iter()
        .map(|p| line.signed_distance(*p).abs())
        .fold(0.0, f64::max);
    (line, dev)
}

struct Refined {
    theta: f64,
    value: f64,
    iterations: usize,
    width: f64,
}

/// Golden-section search on `[a, b]`; `seed` is a known point inside.
fn golden_section(
    f: impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    seed: (f64, f64),
    tol: f64,
) -> Refined {
    let mut best = seed;
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v < best.1 {
            best = (x, v);
        }
    }
    while b - a > tol && iterations < 200 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
            if f1 < best.1 {
                best = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
            if f2 < best.1 {
                best = (x2, f2);
            }
        }
        iterations += 1;
    }
    Refined {
        theta: best.0,
        value: best.1,
        iterations,
        width: b - a,
    }
}

/// Pair quotient with its support vertices frozen, as a pair of vectors
/// `(a, d)` with quotient `(a·n)/(d·n)`.
fn frozen_pair(config: &Configuration, theta: f64) -> Option<(Point, Point)> {
    let n = unit(theta);
    let sup = Supports::at(config, n);
    let (_, pair) = sup.envelope();
    let ActivePair { below, above } = pair?;
    let polys = config.polygons();
    let (sa, sb) = (polys[above].centroid(), polys[below].centroid());
    let u = polys[above].vertices()[sup.down[above].0];
    let v = polys[below].vertices()[sup.up[below].0];
    Some((sa - sb, (v - sb) - (u - sa)))
}

/// Angle in `[lo, hi]` where the frozen quotients active at `lo` and `hi`
/// cross, if any.
fn crossing_angle(config: &Configuration, lo: f64, hi: f64, guess: f64) -> Option<f64> {
    let (a1, d1) = frozen_pair(config, lo)?;
    let (a2, d2) = frozen_pair(config, hi)?;
    if a1 == a2 && d1 == d2 {
        return None;
    }
    // (a1·n)(d2·n) − (a2·n)(d1·n) = 0 as a quadratic form in n.
    let m11 = a1.x * d2.x - a2.x * d1.x;
    let m22 = a1.y * d2.y - a2.y * d1.y;
    let m12 = a1.x * d2.y + a1.y * d2.x - a2.x * d1.y - a2.y * d1.x;
    // m11 c² + m12 c s + m22 s² = mean + amp·cos(2θ − φ)
    let mean = 0.5 * (m11 + m22);
    let cc = 0.5 * (m11 - m22);
    let ss = 0.5 * m12;
    let amp = cc.hypot(ss);
    if amp == 0.0 || (mean / amp).abs() > 1.0 {
        return None;
    }
    let phi = ss.atan2(cc);
    let delta = (-mean / amp).acos();
    let span = hi - lo;
    [phi + delta, phi - delta]
        .into_iter()
        .flat_map(|two_theta| {
            let base = 0.5 * two_theta;
            // Bring each root to the period copy nearest the guess.
            let k = ((guess - base) / PI).round();
            [base + k * PI]
        })
        .filter(|t| *t >= lo - span && *t <= hi + span)
        .min_by(|x, y| {
            (x - guess)
                .abs()
                .partial_cmp(&(y - guess).abs())
                .unwrap_or(Ordering::Equal)
        })
}

fn circular_angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

/// Smallest `c` at which the scaled system has a line transversal, with all
/// optimal lines and their certificates.
pub fn solve_minimal_expansion(
    config: &Configuration,
    opts: &SolverOptions,
) -> Result<Solution, SolveError> {
    opts.validate()?;
    if config.is_empty() {
        return Err(SolveError::EmptyConfiguration);
    }
    let centroids = config.centroids();
    let (axis, deviation) = centroid_axis(&centroids);
    let collinear_limit = opts.collinear_tol * config.scale();
    if config.len() < 3 || deviation <= collinear_limit {
        return Ok(Solution {
            c_m: 0.0,
            lines: vec![axis],
            certificates: Vec::new(),
            degenerate: true,
            classification: Classification::HasTransversal,
            diagnostics: Diagnostics {
                grid_size: 0,
                refinement_iterations: 0,
                bracket_width: 0.0,
            },
        });
    }

    let n = opts.grid_size;
    let step = PI / n as f64;
    let grid: Vec<f64> = (0..n).map(|k| envelope_at(config, k as f64 * step)).collect();

    let mut minima: Vec<usize> = (0..n)
        .filter(|&k| {
            let prev = grid[(k + n - 1) % n];
            let next = grid[(k + 1) % n];
            grid[k] < prev && grid[k] <= next
        })
        .collect();
    if minima.is_empty() {
        let k = (0..n)
            .min_by(|&i, &j| grid[i].total_cmp(&grid[j]).then(i.cmp(&j)))
            .unwrap_or(0);
        minima.push(k);
    }

    let f = |t: f64| envelope_at(config, t);
    let mut diagnostics = Diagnostics {
        grid_size: n,
        refinement_iterations: 0,
        bracket_width: 0.0,
    };
    let mut candidates: Vec<(f64, f64)> = Vec::with_capacity(minima.len());
    for k in minima {
        let center = k as f64 * step;
        let (lo, hi) = (center - step, center + step);
        let r = golden_section(f, lo, hi, (center, grid[k]), opts.angle_tol);
        diagnostics.refinement_iterations += r.iterations;
        diagnostics.bracket_width = diagnostics.bracket_width.max(r.width);
        let mut best = (r.theta, r.value);
        let probe = (r.width.max(opts.angle_tol)).max(1e-12);
        if let Some(t) = crossing_angle(config, best.0 - probe, best.0 + probe, best.0) {
            let v = f(t);
            if v <= best.1 {
                best = (t, v);
            }
        }
        candidates.push((Direction::new(best.0).theta(), best.1));
    }

    let c_m = candidates
        .iter()
        .map(|c| c.1)
        .fold(f64::INFINITY, f64::min);
    let cutoff = c_m + opts.value_tol * c_m.max(1.0);
    let mut chosen: Vec<(f64, f64)> = candidates.into_iter().filter(|c| c.1 <= cutoff).collect();
    // Exact comparisons; ties by smaller theta.
    chosen.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)));
    let mut kept: Vec<(f64, f64)> = Vec::new();
    for cand in chosen {
        if kept
            .iter()
            .all(|k| circular_angle_gap(k.0, cand.0) > LINE_DEDUP_ANGLE)
        {
            kept.push(cand);
        }
    }

    let mut lines: Vec<Line> = kept
        .iter()
        .map(|&(theta, _)| min_c_for_direction(config, Direction::new(theta)).line())
        .collect();
    lines.sort_by(|a, b| {
        a.theta()
            .total_cmp(&b.theta())
            .then(a.offset().total_cmp(&b.offset()))
    });
    let certificates = lines
        .iter()
        .map(|l| build_certificate(config, c_m, l, opts.certificate_tol))
        .collect();

    Ok(Solution {
        c_m,
        lines,
        certificates,
        degenerate: false,
        classification: classify(c_m, opts.value_tol),
        diagnostics,
    })
}

pub(crate) fn classify(c_m: f64, value_tol: f64) -> Classification {
    if c_m <= 1.0 + value_tol {
        Classification::HasTransversal
    } else {
        Classification::InitialConfiguration
    }
}

fn build_certificate(config: &Configuration, c_m: f64, line: &Line, tol: f64) -> Certificate {
    let n = line.normal();
    let scale = c_m.max(1.0);
    let mut cert = Certificate {
        tangent_indices: Vec::new(),
        contacts: Vec::new(),
        sides: Vec::new(),
        residuals: Vec::new(),
    };
    for (i, poly) in config.polygons().iter().enumerate() {
        let residual = (correcting_factor(poly, line) - c_m).abs() / scale;
        if residual > tol {
            continue;
        }
        let contact = match poly.scaled(c_m) {
            Ok(scaled) => {
                let dist_tol = factor::factor_tol_to_distance(poly, n, c_m, tol)
                    .max(factor::default_tangency_tol(&scaled));
                is_tangent(&scaled, line, dist_tol).1
            }
            Err(_) => Contact::None,
        };
        let side_tol = 1e-12 * config.scale();
        cert.tangent_indices.push(i);
        cert.contacts.push(contact);
        cert.sides.push(side_of(poly, line, side_tol));
        cert.residuals.push(residual);
    }
    cert
}

/// Tangency certificate for `line` at ratio `c_m`.
pub fn extract_certificate(
    config: &Configuration,
    c_m: f64,
    line: &Line,
    tol: f64,
) -> Result<Certificate, SolveError> {
    let cert = build_certificate(config, c_m, line, tol);
    match cert.problem() {
        None => Ok(cert),
        Some(why) => Err(SolveError::CertificateInvalid(why)),
    }
}

/// Whether the unscaled system admits a line transversal.
pub fn transversal_exists(config: &Configuration) -> bool {
    let opts = SolverOptions::default();
    match solve_minimal_expansion(config, &opts) {
        Ok(sol) => sol.c_m <= 1.0 + opts.value_tol,
        Err(_) => false,
    }
}
