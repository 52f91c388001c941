//! Brute-force validators and a seeded instance generator.
//!
//! Nothing here uses the pairwise quotient formula of the solver: the
//! oracle bisects on `c` at every sampled direction and tests whether the
//! projected intervals share a point. Cost is
//! `O(angle_steps · n · (V + log(1/c_tol)))`, fine for desk-scale
//! instances and not meant for production use.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::factor::{correcting_factor, side_of, Side};
use crate::geom::{Configuration, ConvexPolygon, Direction, Point};
use crate::solver::{feasible_offset_interval, Solution};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RecipeError {
    #[error("recipe needs at least one polygon")]
    NoPolygons,
    #[error("invalid vertex range {0}..={1} (need 3 <= min <= max)")]
    VertexRange(usize, usize),
    #[error("invalid centroid box")]
    CentroidBox,
    #[error("invalid radius range {0}..={1} (need 0 < min <= max)")]
    RadiusRange(f64, f64),
}

/// Everything that determines a random instance.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceRecipe {
    pub seed: u64,
    pub n_polygons: usize,
    /// Inclusive range of hull sample counts per polygon.
    pub vertices_range: (usize, usize),
    /// Axis-aligned box `(min, max)` for centroids.
    pub centroid_box: (Point, Point),
    pub radius_range: (f64, f64),
}

impl Default for InstanceRecipe {
    fn default() -> Self {
        InstanceRecipe {
            seed: 0,
            n_polygons: 5,
            vertices_range: (3, 12),
            centroid_box: (Point::new(0.0, 0.0), Point::new(1.0, 1.0)),
            radius_range: (0.05, 0.25),
        }
    }
}

impl InstanceRecipe {
    pub fn validate(&self) -> Result<(), RecipeError> {
        if self.n_polygons == 0 {
            return Err(RecipeError::NoPolygons);
        }
        let (vmin, vmax) = self.vertices_range;
        if vmin < 3 || vmin > vmax {
            return Err(RecipeError::VertexRange(vmin, vmax));
        }
        let (lo, hi) = self.centroid_box;
        if !(lo.is_finite() && hi.is_finite() && lo.x <= hi.x && lo.y <= hi.y) {
            return Err(RecipeError::CentroidBox);
        }
        let (rmin, rmax) = self.radius_range;
        if !(rmin.is_finite() && rmax.is_finite() && rmin > 0.0 && rmin <= rmax) {
            return Err(RecipeError::RadiusRange(rmin, rmax));
        }
        Ok(())
    }
}

/// Andrew's monotone chain; strict hull in counterclockwise order.
fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: Point, a: Point, b: Point| (a - o).cross(b - o);
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

fn random_polygon(rng: &mut ChaCha8Rng, recipe: &InstanceRecipe) -> ConvexPolygon {
    let (lo, hi) = recipe.centroid_box;
    let center = Point::new(rng.gen_range(lo.x..=hi.x), rng.gen_range(lo.y..=hi.y));
    let (vmin, vmax) = recipe.vertices_range;
    let (rmin, rmax) = recipe.radius_range;
    loop {
        let k = rng.gen_range(vmin..=vmax);
        let radius = rng.gen_range(rmin..=rmax);
        let samples: Vec<Point> = (0..k)
            .map(|_| {
                let a = rng.gen_range(0.0..2.0 * PI);
                center + radius * Point::new(a.cos(), a.sin())
            })
            .collect();
        let hull = convex_hull(samples);
        if hull.len() < 3 {
            continue;
        }
        let inv = 1.0 / hull.len() as f64;
        let mean = hull.iter().fold(Point::ORIGIN, |acc, &p| acc + p);
        let shift = center - inv * mean;
        if let Ok(poly) = ConvexPolygon::new(hull.into_iter().map(|p| p + shift).collect()) {
            return poly;
        }
    }
}

/// Deterministic random configuration for a recipe.
pub fn random_instance(recipe: &InstanceRecipe) -> Result<Configuration, RecipeError> {
    recipe.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(recipe.seed);
    let polygons = (0..recipe.n_polygons)
        .map(|_| random_polygon(&mut rng, recipe))
        .collect();
    Ok(Configuration::new(polygons).expect("recipe has at least one polygon"))
}

/// Projection bounds of each polygon's centroid and strip half-widths at one
/// normal, computed straight from the vertices.
struct Projections {
    center: Vec<f64>,
    reach_up: Vec<f64>,
    reach_down: Vec<f64>,
}

impl Projections {
    fn at(config: &Configuration, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let mut out = Projections {
            center: Vec::with_capacity(config.len()),
            reach_up: Vec::with_capacity(config.len()),
            reach_down: Vec::with_capacity(config.len()),
        };
        for poly in config.polygons() {
            let g = poly.centroid();
            let mid = c * g.x + s * g.y;
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for v in poly.vertices() {
                let p = c * v.x + s * v.y;
                lo = lo.min(p);
                hi = hi.max(p);
            }
            out.center.push(mid);
            out.reach_up.push(hi - mid);
            out.reach_down.push(mid - lo);
        }
        out
    }

    fn stabbable(&self, c: f64) -> bool {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for i in 0..self.center.len() {
            lo = lo.max(self.center[i] - c * self.reach_down[i]);
            hi = hi.min(self.center[i] + c * self.reach_up[i]);
        }
        lo <= hi
    }

    /// Bisection for the smallest stabbable ratio, to absolute `c_tol`.
    fn min_ratio(&self, c_tol: f64) -> f64 {
        if self.stabbable(0.0) {
            return 0.0;
        }
        let mut hi = 1.0;
        let mut doublings = 0;
        while !self.stabbable(hi) {
            hi *= 2.0;
            doublings += 1;
            if doublings > 1100 {
                return f64::INFINITY;
            }
        }
        let mut lo = 0.0;
        while hi - lo > c_tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.stabbable(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

/// Number of grid-local minima refined by the fine pass.
const ORACLE_REFINED_MINIMA: usize = 4;
/// Samples in the fine pass around each refined minimum.
const ORACLE_REFINE_SAMPLES: usize = 4000;

/// Independent estimate of the minimal expansion ratio.
///
/// Samples `angle_steps` uniform normal angles in `[0, π)`, bisects the
/// smallest stabbable ratio at each, then resamples a window of one grid
/// step around the best few local minima.
pub fn brute_force_c_m(config: &Configuration, angle_steps: usize, c_tol: f64) -> f64 {
    if config.len() == 1 {
        return 0.0;
    }
    let steps = angle_steps.max(2);
    let step = PI / steps as f64;
    let values: Vec<f64> = (0..steps)
        .map(|k| Projections::at(config, k as f64 * step).min_ratio(c_tol))
        .collect();
    let mut best = values.iter().copied().fold(f64::INFINITY, f64::min);
    if best == 0.0 {
        return 0.0;
    }

    let mut minima: Vec<usize> = (0..steps)
        .filter(|&k| {
            values[k] <= values[(k + steps - 1) % steps] && values[k] <= values[(k + 1) % steps]
        })
        .collect();
    minima.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    minima.truncate(ORACLE_REFINED_MINIMA);
    for k in minima {
        let center = k as f64 * step;
        let fine = 2.0 * step / ORACLE_REFINE_SAMPLES as f64;
        for j in 0..=ORACLE_REFINE_SAMPLES {
            let theta = center - step + j as f64 * fine;
            let proj = Projections::at(config, theta);
            if proj.stabbable(best) {
                best = best.min(proj.min_ratio(c_tol));
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub angle_steps: usize,
    pub c_tol: f64,
    /// Allowed relative gap between oracle and reported ratio.
    pub value_rel_tol: f64,
    /// Absolute slack on the same comparison, covering tiny ratios.
    pub value_abs_tol: f64,
    /// Relative factor residual for a polygon to count as tangent.
    pub residual_tol: f64,
    /// Relative shrink applied to `c_m` for the minimality scan.
    pub shrink: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            angle_steps: 100_000,
            c_tol: 1e-10,
            value_rel_tol: 1e-5,
            value_abs_tol: 1e-6,
            residual_tol: 1e-7,
            shrink: 1e-4,
        }
    }
}

/// Recomputed data for one reported line.
#[derive(Clone, Debug, PartialEq)]
pub struct LineCheck {
    pub max_factor: f64,
    pub tangent_indices: Vec<usize>,
    pub sides: Vec<Side>,
    pub residuals: Vec<f64>,
    /// Every polygon of the scaled system meets the line.
    pub is_transversal: bool,
    /// At least three tangent polygons with centroids on both sides.
    pub certificate_ok: bool,
    /// Recomputed tangent set equals the reported certificate.
    pub matches_reported: bool,
}

impl LineCheck {
    pub fn passed(&self) -> bool {
        self.is_transversal && self.certificate_ok && self.matches_reported
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub oracle_c_m: f64,
    pub reported_c_m: f64,
    pub relative_error: f64,
    pub value_ok: bool,
    pub degenerate: bool,
    /// Empty for degenerate solutions.
    pub lines: Vec<LineCheck>,
    /// `None` when skipped (degenerate solutions).
    pub minimality_ok: Option<bool>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        let lines_ok = self.degenerate
            || (!self.lines.is_empty() && self.lines.iter().all(LineCheck::passed));
        self.value_ok && lines_ok && self.minimality_ok != Some(false)
    }
}

fn check_line(
    config: &Configuration,
    sol: &Solution,
    index: usize,
    opts: &VerifyOptions,
) -> LineCheck {
    let line = &sol.lines[index];
    let c_m = sol.c_m;
    let denom = c_m.max(1.0);
    let factors: Vec<f64> = config
        .polygons()
        .iter()
        .map(|p| correcting_factor(p, line))
        .collect();
    let max_factor = factors.iter().copied().fold(0.0, f64::max);
    let mut check = LineCheck {
        max_factor,
        tangent_indices: Vec::new(),
        sides: Vec::new(),
        residuals: Vec::new(),
        is_transversal: max_factor <= c_m + opts.residual_tol * denom,
        certificate_ok: false,
        matches_reported: false,
    };
    for (i, f) in factors.iter().enumerate() {
        let r = (f - c_m).abs() / denom;
        if r <= opts.residual_tol {
            check.tangent_indices.push(i);
            check.residuals.push(r);
            check
                .sides
                .push(side_of(&config.polygons()[i], line, 1e-12 * config.scale()));
        }
    }
    check.certificate_ok = check.tangent_indices.len() >= 3
        && check.sides.contains(&Side::Negative)
        && check.sides.contains(&Side::Positive);
    check.matches_reported = sol
        .certificates
        .get(index)
        .is_some_and(|c| c.tangent_indices == check.tangent_indices && c.sides == check.sides);
    check
}

/// Independently re-checks a solution: oracle value, per-line tangency and
/// sides, and infeasibility just below the reported ratio.
pub fn verify_solution(config: &Configuration, sol: &Solution, opts: &VerifyOptions) -> VerifyReport {
    let oracle = brute_force_c_m(config, opts.angle_steps, opts.c_tol);
    let gap = (oracle - sol.c_m).abs();
    let top = oracle.max(sol.c_m);
    let relative_error = if top > 0.0 { gap / top } else { 0.0 };

    if sol.degenerate {
        let value_ok = sol.c_m == 0.0 && oracle <= opts.value_rel_tol;
        return VerifyReport {
            oracle_c_m: oracle,
            reported_c_m: sol.c_m,
            relative_error,
            value_ok,
            degenerate: true,
            lines: Vec::new(),
            minimality_ok: None,
        };
    }

    let value_ok = relative_error <= opts.value_rel_tol || gap <= opts.value_abs_tol;
    let lines = (0..sol.lines.len())
        .map(|i| check_line(config, sol, i, opts))
        .collect::<Vec<_>>();
    let below = sol.c_m * (1.0 - opts.shrink);
    let steps = opts.angle_steps.max(2);
    let minimality_ok = (0..steps).all(|k| {
        let dir = Direction::new(k as f64 * PI / steps as f64);
        feasible_offset_interval(config, below, dir).is_none()
    });
    VerifyReport {
        oracle_c_m: oracle,
        reported_c_m: sol.c_m,
        relative_error,
        value_ok,
        degenerate: false,
        lines,
        minimality_ok: Some(minimality_ok),
    }
}
