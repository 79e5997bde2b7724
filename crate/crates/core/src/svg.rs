//! SVG plots of a reduction: the two disk curves and their error profiles.
//!
//! The swept region of a disk curve is drawn approximately: its two offset
//! polylines `p(t) ± r(t) n(t)` plus the end disks. Where the center curve
//! has no usable normal (a cusp), the sampled disk is drawn as a circle
//! instead.

use std::fmt::Write as _;

use crate::curve::DiskRationalBezier;
use crate::disk::Point;
use crate::error::Result;
use crate::exec::{map_grid, Execution};
use crate::metrics::{error_profile, ErrorSample};

const PANEL: f64 = 400.0;
const MARGIN: f64 = 30.0;
const ORIGINAL_COLOR: &str = "#000000";
const REDUCED_COLOR: &str = "#1f4fd6";

#[derive(Debug, Clone, Copy)]
struct Sample {
    center: Point,
    radius: f64,
    normal: Option<Point>,
}

fn sample_curve(c: &DiskRationalBezier, samples: usize, exec: Execution) -> Vec<Sample> {
    let scale = c.centers().iter().map(|p| p.norm()).fold(1.0, f64::max);
    map_grid(samples, exec, |t| {
        let d = c.center_derivative(t);
        let len = d.norm();
        let normal = (len > 1e-9 * scale).then(|| Point::new(-d.y / len, d.x / len));
        Sample {
            center: c.center_at(t),
            radius: c.radius_at(t),
            normal,
        }
    })
}

/// Maps model coordinates into one panel, y up.
struct Frame {
    min: Point,
    scale: f64,
    offset_x: f64,
}

impl Frame {
    fn fit(samples: &[&[Sample]], offset_x: f64) -> Self {
        let (mut lo, mut hi) = (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for s in samples.iter().flat_map(|v| v.iter()) {
            lo.x = lo.x.min(s.center.x - s.radius);
            lo.y = lo.y.min(s.center.y - s.radius);
            hi.x = hi.x.max(s.center.x + s.radius);
            hi.y = hi.y.max(s.center.y + s.radius);
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
        Self {
            min: lo,
            scale: (PANEL - 2.0 * MARGIN) / span,
            offset_x,
        }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (
            self.offset_x + MARGIN + (p.x - self.min.x) * self.scale,
            PANEL - MARGIN - (p.y - self.min.y) * self.scale,
        )
    }
}

fn polyline(out: &mut String, pts: &[(f64, f64)], color: &str, width: f64) {
    if pts.len() < 2 {
        return;
    }
    let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
    let _ = writeln!(
        out,
        r#"  <polyline fill="none" stroke="{color}" stroke-width="{width}" points="{}"/>"#,
        coords.join(" ")
    );
}

fn circle(out: &mut String, (x, y): (f64, f64), r: f64, color: &str) {
    let _ = writeln!(
        out,
        r#"  <circle cx="{x:.3}" cy="{y:.3}" r="{r:.3}" fill="none" stroke="{color}" stroke-width="0.75"/>"#
    );
}

fn envelope(out: &mut String, samples: &[Sample], frame: &Frame, color: &str) {
    let mut sides: [Vec<(f64, f64)>; 2] = [Vec::new(), Vec::new()];
    let flush = |out: &mut String, sides: &mut [Vec<(f64, f64)>; 2]| {
        for side in sides.iter_mut() {
            polyline(out, side, color, 1.5);
            side.clear();
        }
    };
    for s in samples {
        match s.normal {
            Some(n) => {
                sides[0].push(frame.map(s.center + n * s.radius));
                sides[1].push(frame.map(s.center - n * s.radius));
            }
            None => {
                flush(out, &mut sides);
                circle(out, frame.map(s.center), s.radius * frame.scale, color);
            }
        }
    }
    flush(out, &mut sides);
    let centers: Vec<(f64, f64)> = samples.iter().map(|s| frame.map(s.center)).collect();
    polyline(out, &centers, color, 0.5);
    for s in [samples.first(), samples.last()].into_iter().flatten() {
        circle(out, frame.map(s.center), s.radius * frame.scale, color);
    }
}

fn error_panel(out: &mut String, profile: &[ErrorSample], pick: fn(&ErrorSample) -> f64, offset_x: f64, title: &str) {
    let max = profile.iter().map(pick).fold(0.0, f64::max);
    let top = if max > 0.0 { max } else { 1.0 };
    let (x0, y0) = (offset_x + MARGIN, PANEL - MARGIN);
    let w = PANEL - 2.0 * MARGIN;
    let _ = writeln!(
        out,
        r##"  <path d="M{x0:.3},{:.3} V{y0:.3} H{:.3}" fill="none" stroke="#808080" stroke-width="1"/>"##,
        MARGIN,
        x0 + w
    );
    let _ = writeln!(
        out,
        r#"  <text x="{:.3}" y="{:.3}" font-size="12" font-family="sans-serif">{title} (max {max:.4})</text>"#,
        x0,
        MARGIN - 10.0
    );
    let pts: Vec<(f64, f64)> = profile
        .iter()
        .map(|s| (x0 + s.t * w, y0 - pick(s) / top * w))
        .collect();
    polyline(out, &pts, REDUCED_COLOR, 1.0);
}

/// Three side-by-side panels: both disk curves, the center error against
/// `t` and the radius error against `t`. Output depends only on the inputs.
pub fn render_reduction(original: &DiskRationalBezier, reduced: &DiskRationalBezier, samples: usize) -> Result<String> {
    let profile = error_profile(original, reduced, samples, Execution::default())?;
    let a = sample_curve(original, samples, Execution::default());
    let b = sample_curve(reduced, samples, Execution::default());
    let frame = Frame::fit(&[&a, &b], 0.0);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = 3.0 * PANEL,
        h = PANEL
    );
    let _ = writeln!(out, r##"  <rect width="100%" height="100%" fill="#ffffff"/>"##);
    envelope(&mut out, &a, &frame, ORIGINAL_COLOR);
    envelope(&mut out, &b, &frame, REDUCED_COLOR);
    error_panel(&mut out, &profile, |s| s.center_err, PANEL, "center error");
    error_panel(&mut out, &profile, |s| s.radius_err, 2.0 * PANEL, "radius error");
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

/// A single disk curve, drawn like the original curve in
/// [`render_reduction`].
pub fn render_curve(c: &DiskRationalBezier, samples: usize) -> String {
    let s = sample_curve(c, samples.max(2), Execution::default());
    let frame = Frame::fit(&[&s], 0.0);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{PANEL}" height="{PANEL}" viewBox="0 0 {PANEL} {PANEL}">"#
    );
    envelope(&mut out, &s, &frame, ORIGINAL_COLOR);
    let _ = writeln!(out, "</svg>");
    out
}
