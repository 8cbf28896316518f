//! Minimal SVG line plots: one closed path per curve, viewBox fitted to
//! the joint bounding box plus a 5% margin, y axis pointing up.

use num_complex::Complex64;
use std::fmt::Write;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

/// A labelled closed curve.
pub struct Curve<'a> {
    pub label: String,
    pub points: &'a [Complex64],
}

fn coord(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render(curves: &[Curve<'_>], title: &str) -> String {
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in curves.iter().flat_map(|c| c.points.iter()) {
        xmin = xmin.min(p.re);
        xmax = xmax.max(p.re);
        ymin = ymin.min(p.im);
        ymax = ymax.max(p.im);
    }
    if xmin > xmax {
        (xmin, xmax, ymin, ymax) = (-1.0, 1.0, -1.0, 1.0);
    }
    let span = (xmax - xmin).max(ymax - ymin).max(1e-12);
    let margin = 0.05 * span;
    let (vx, vy) = (xmin - margin, -ymax - margin);
    let (vw, vh) = (xmax - xmin + 2.0 * margin, ymax - ymin + 2.0 * margin);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{vx:.6} {vy:.6} {vw:.6} {vh:.6}\" width=\"600\" height=\"{:.0}\">",
        600.0 * vh / vw
    );
    let _ = writeln!(out, "  <title>{}</title>", escape(title));
    for (i, curve) in curves.iter().enumerate() {
        if curve.points.is_empty() {
            continue;
        }
        let mut d = String::new();
        for (j, p) in curve.points.iter().enumerate() {
            let cmd = if j == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{cmd}{} {} ", coord(p.re), coord(-p.im));
        }
        d.push('Z');
        let _ = writeln!(
            out,
            "  <path d=\"{d}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" vector-effect=\"non-scaling-stroke\"><title>{}</title></path>",
            PALETTE[i % PALETTE.len()],
            escape(&curve.label)
        );
    }
    out.push_str("</svg>\n");
    out
}
