//! Unit-sphere figures.
//!
//! Output is deterministic text: every coordinate is printed with four
//! decimals, so identical inputs give identical bytes.

use std::f64::consts::TAU;
use std::fmt::Write;

use crate::birkhoff::OrthoPair;
use crate::geometry::Point2;
use crate::norm::Norm;

pub const SPHERE_SAMPLES: usize = 1024;
const SIZE: f64 = 480.0;
const RADIUS_PX: f64 = 180.0;

struct Canvas {
    scale: f64,
}

impl Canvas {
    fn map(&self, p: Point2) -> (f64, f64) {
        (SIZE / 2.0 + p.x * self.scale, SIZE / 2.0 - p.y * self.scale)
    }

    fn line(&self, out: &mut String, a: Point2, b: Point2, class: &str) {
        let (x1, y1) = self.map(a);
        let (x2, y2) = self.map(b);
        let _ = writeln!(
            out,
            r#"  <line class="{class}" x1="{x1:.4}" y1="{y1:.4}" x2="{x2:.4}" y2="{y2:.4}"/>"#
        );
    }

    fn dot(&self, out: &mut String, p: Point2, label: &str) {
        let (x, y) = self.map(p);
        let _ = writeln!(out, r#"  <circle class="point" cx="{x:.4}" cy="{y:.4}" r="3"/>"#);
        let _ = writeln!(
            out,
            r#"  <text x="{:.4}" y="{:.4}">{label}</text>"#,
            x + 6.0,
            y - 6.0
        );
    }
}

/// SVG of the unit sphere of `norm` with axes and, optionally, a witness
/// pair drawn as the triangle `x, y, −y` whose sides have lengths
/// `‖x−y‖`, `‖x+y‖` and 2.
pub fn sphere_svg(norm: &Norm, witness: Option<&OrthoPair>, caption: &str) -> String {
    let points: Vec<Point2> = (0..SPHERE_SAMPLES)
        .map(|k| norm.sphere_point(k as f64 * TAU / SPHERE_SAMPLES as f64).coords)
        .collect();
    let extent = points
        .iter()
        .map(|p| p.x.abs().max(p.y.abs()))
        .fold(0.0, f64::max);
    let canvas = Canvas {
        scale: RADIUS_PX / extent,
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    out.push_str(concat!(
        "  <style>\n",
        "    .axis { stroke: #999; stroke-width: 1; }\n",
        "    .sphere { fill: none; stroke: #1f4e9c; stroke-width: 2; }\n",
        "    .vector { stroke: #333; stroke-width: 1.5; }\n",
        "    .sum { stroke: #c0392b; stroke-width: 2; }\n",
        "    .diff { stroke: #27ae60; stroke-width: 2; }\n",
        "    .base { stroke: #777; stroke-width: 1; stroke-dasharray: 4 3; }\n",
        "    .point { fill: #000; }\n",
        "    text { font-family: sans-serif; font-size: 13px; }\n",
        "  </style>\n"
    ));
    let reach = SIZE / 2.0 / canvas.scale;
    canvas.line(
        &mut out,
        Point2::new(-reach, 0.0),
        Point2::new(reach, 0.0),
        "axis",
    );
    canvas.line(
        &mut out,
        Point2::new(0.0, -reach),
        Point2::new(0.0, reach),
        "axis",
    );

    out.push_str(r#"  <polyline class="sphere" points=""#);
    for (i, p) in points.iter().chain(points.first()).enumerate() {
        let (x, y) = canvas.map(*p);
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{x:.4},{y:.4}");
    }
    out.push_str("\"/>\n");

    if let Some(w) = witness {
        let (x, y) = (w.x.coords, w.y.coords);
        canvas.line(&mut out, Point2::ZERO, x, "vector");
        canvas.line(&mut out, Point2::ZERO, y, "vector");
        canvas.line(&mut out, y, -y, "base");
        canvas.line(&mut out, y, x, "diff");
        canvas.line(&mut out, -y, x, "sum");
        canvas.dot(&mut out, x, "x");
        canvas.dot(&mut out, y, "y");
        canvas.dot(&mut out, -y, "-y");
    }
    let _ = writeln!(out, r#"  <text x="10" y="20">{}</text>"#, escape(caption));
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
