//! SVG 1.1 drawings of a configuration and, optionally, its minimal
//! configuration.
//!
//! Palette: original polygons filled `#9ecae1` with stroke `#3182bd`;
//! scaled polygons outlined in `#636363`, tangent ones in `#e6550d`;
//! transversals in `#d62728`. The viewport is the bounding box of the
//! original and scaled polygons, inflated by 10% on each side. World `y`
//! points up.

use std::fmt::Write as _;
use std::path::Path;

use crate::geom::{Configuration, Line, Point};
use crate::io::{write_file, IoError};
use crate::solver::Solution;

const WIDTH_PX: f64 = 800.0;

struct Frame {
    lo: Point,
    hi: Point,
}

impl Frame {
    fn width(&self) -> f64 {
        self.hi.x - self.lo.x
    }

    fn height(&self) -> f64 {
        self.hi.y - self.lo.y
    }

    fn union(&mut self, lo: Point, hi: Point) {
        self.lo = Point::new(self.lo.x.min(lo.x), self.lo.y.min(lo.y));
        self.hi = Point::new(self.hi.x.max(hi.x), self.hi.y.max(hi.y));
    }
}

fn fmt_num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn points_attr(pts: &[Point]) -> String {
    pts.iter()
        .map(|p| format!("{},{}", fmt_num(p.x), fmt_num(-p.y)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Clips the infinite line to the frame (Liang–Barsky).
fn clip_line(line: &Line, frame: &Frame) -> Option<(Point, Point)> {
    let n = line.normal();
    let d = n.perp();
    let origin = line.offset() * n;
    let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
    for (p, q_lo, q_hi) in [
        (d.x, frame.lo.x - origin.x, frame.hi.x - origin.x),
        (d.y, frame.lo.y - origin.y, frame.hi.y - origin.y),
    ] {
        if p.abs() < 1e-15 {
            if q_lo > 0.0 || q_hi < 0.0 {
                return None;
            }
            continue;
        }
        let (a, b) = (q_lo / p, q_hi / p);
        t0 = t0.max(a.min(b));
        t1 = t1.min(a.max(b));
    }
    (t0 <= t1).then(|| (origin + t0 * d, origin + t1 * d))
}

pub fn render_svg_string(config: &Configuration, sol: Option<&Solution>) -> String {
    let (lo, hi) = config.bounding_box();
    let mut frame = Frame { lo, hi };
    let scaled = sol
        .filter(|s| s.c_m > 0.0)
        .and_then(|s| config.scaled(s.c_m).ok());
    if let Some(sc) = &scaled {
        let (lo, hi) = sc.bounding_box();
        frame.union(lo, hi);
    }
    let pad = 0.1 * frame.width().max(frame.height()).max(1e-9);
    frame.lo = Point::new(frame.lo.x - pad, frame.lo.y - pad);
    frame.hi = Point::new(frame.hi.x + pad, frame.hi.y + pad);

    let unit = frame.width().max(frame.height());
    let stroke = fmt_num(unit * 0.003);
    let height_px = WIDTH_PX * frame.height() / frame.width();

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        fmt_num(WIDTH_PX),
        fmt_num(height_px),
        fmt_num(frame.lo.x),
        fmt_num(-frame.hi.y),
        fmt_num(frame.width()),
        fmt_num(frame.height())
    );
    let _ = writeln!(
        out,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#ffffff"/>"##,
        fmt_num(frame.lo.x),
        fmt_num(-frame.hi.y),
        fmt_num(frame.width()),
        fmt_num(frame.height())
    );

    for (i, p) in config.polygons().iter().enumerate() {
        let _ = writeln!(
            out,
            r##"<polygon class="original" data-index="{}" points="{}" fill="#9ecae1" fill-opacity="0.8" stroke="#3182bd" stroke-width="{stroke}"/>"##,
            i + 1,
            points_attr(p.vertices())
        );
    }

    let tangent: Vec<usize> = sol
        .map(|s| {
            let mut v: Vec<usize> = s
                .certificates
                .iter()
                .flat_map(|c| c.tangent_indices.iter().copied())
                .collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .unwrap_or_default();

    if let Some(sc) = &scaled {
        for (i, p) in sc.polygons().iter().enumerate() {
            let is_tangent = tangent.binary_search(&i).is_ok();
            let color = if is_tangent { "#e6550d" } else { "#636363" };
            let _ = writeln!(
                out,
                r#"<polygon class="scaled" data-index="{}" data-tangent="{}" points="{}" fill="none" stroke="{color}" stroke-width="{stroke}"/>"#,
                i + 1,
                is_tangent,
                points_attr(p.vertices())
            );
        }
    }

    let r = fmt_num(unit * 0.006);
    for (i, c) in config.centroids().iter().enumerate() {
        let mark = if tangent.binary_search(&i).is_ok() {
            "tangent-mark"
        } else {
            "centroid"
        };
        let fill = if mark == "tangent-mark" { "#e6550d" } else { "#08519c" };
        let _ = writeln!(
            out,
            r#"<circle class="{mark}" cx="{}" cy="{}" r="{r}" fill="{fill}"/>"#,
            fmt_num(c.x),
            fmt_num(-c.y)
        );
    }

    if let Some(s) = sol {
        let font = fmt_num(unit * 0.03);
        for (k, line) in s.lines.iter().enumerate() {
            let Some((a, b)) = clip_line(line, &frame) else {
                continue;
            };
            let _ = writeln!(
                out,
                r##"<line class="transversal" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#d62728" stroke-width="{stroke}"/>"##,
                fmt_num(a.x),
                fmt_num(-a.y),
                fmt_num(b.x),
                fmt_num(-b.y)
            );
            let label = a + 0.1 * (b - a);
            let _ = writeln!(
                out,
                r##"<text x="{}" y="{}" font-size="{font}" font-family="sans-serif" fill="#d62728">t{}</text>"##,
                fmt_num(label.x),
                fmt_num(-label.y),
                k + 1
            );
        }
        let _ = writeln!(
            out,
            r##"<text x="{}" y="{}" font-size="{}" font-family="sans-serif" fill="#000000">c_m = {:.6}</text>"##,
            fmt_num(frame.lo.x + pad * 0.2),
            fmt_num(-frame.hi.y + pad * 0.6),
            fmt_num(unit * 0.03),
            s.c_m
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn render_svg(config: &Configuration, sol: Option<&Solution>, path: &Path) -> Result<(), IoError> {
    write_file(path, &render_svg_string(config, sol))
}
