//! Deterministic SVG rendering of planar colored configurations.

use std::fmt::Write;

use inversive::colorings::{ColorIndex, ColoredConfig};
use inversive::geom::{Hypersphere, Sphere};

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

fn fill(c: ColorIndex) -> &'static str {
    PALETTE[(c.0 as usize + PALETTE.len() - 1) % PALETTE.len()]
}

struct Frame {
    min: [f64; 2],
    scale: f64,
}

impl Frame {
    fn new(points: &[[f64; 2]]) -> Frame {
        let mut min = [-1.0f64, -1.0];
        let mut max = [1.0f64, 1.0];
        for p in points {
            for i in 0..2 {
                min[i] = min[i].min(p[i]);
                max[i] = max[i].max(p[i]);
            }
        }
        let span = (max[0] - min[0]).max(max[1] - min[1]) * 1.1;
        let center = [(min[0] + max[0]) / 2.0, (min[1] + max[1]) / 2.0];
        Frame { min: [center[0] - span / 2.0, center[1] - span / 2.0], scale: (SIZE - 2.0 * MARGIN) / span }
    }

    fn x(&self, x: f64) -> f64 {
        MARGIN + (x - self.min[0]) * self.scale
    }

    /// SVG y grows downwards.
    fn y(&self, y: f64) -> f64 {
        SIZE - MARGIN - (y - self.min[1]) * self.scale
    }
}

/// Renders the configuration; `highlight` draws a witness circle or line.
/// Points at infinity appear as a labeled glyph in the top margin.
pub fn render(config: &ColoredConfig, highlight: Option<&Sphere>) -> Result<String, String> {
    if config.n() != 2 {
        return Err(format!("plots need n = 2, got n = {}", config.n()));
    }
    let finite: Vec<([f64; 2], ColorIndex)> = config
        .points()
        .iter()
        .filter_map(|(p, c)| p.to_f64().map(|x| ([x[0], x[1]], *c)))
        .collect();
    let frame = Frame::new(&finite.iter().map(|(p, _)| *p).collect::<Vec<_>>());
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let inner = SIZE - 2.0 * MARGIN;
    let _ = writeln!(
        out,
        r#"<clipPath id="plot"><rect x="{MARGIN}" y="{MARGIN}" width="{inner}" height="{inner}"/></clipPath>"#
    );
    let _ = writeln!(
        out,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{inner}" height="{inner}" fill="none" stroke="#cccccc"/>"##
    );
    // Coordinate axes.
    let (ox, oy) = (frame.x(0.0), frame.y(0.0));
    let _ = writeln!(
        out,
        r##"<g clip-path="url(#plot)" stroke="#999999" stroke-width="1"><line x1="0" y1="{oy:.3}" x2="{SIZE}" y2="{oy:.3}"/><line x1="{ox:.3}" y1="0" x2="{ox:.3}" y2="{SIZE}"/></g>"##
    );
    if let Some(sphere) = highlight {
        if let Some(h) = planar_surface(sphere) {
            draw_sphere(&mut out, &frame, h);
        }
    }
    for (p, c) in &finite {
        let _ = writeln!(
            out,
            r##"<circle cx="{:.3}" cy="{:.3}" r="4" fill="{}" stroke="#000000" stroke-width="0.5"><title>color {}</title></circle>"##,
            frame.x(p[0]),
            frame.y(p[1]),
            fill(*c),
            c.0
        );
    }
    for (i, c) in config.points().iter().filter(|(p, _)| p.is_infinity()).map(|(_, c)| c).enumerate() {
        let x = SIZE - MARGIN - 10.0 - 30.0 * i as f64;
        let _ = writeln!(
            out,
            r##"<text x="{x:.3}" y="{:.3}" font-family="sans-serif" font-size="18" fill="{}" text-anchor="middle">∞<title>color {}</title></text>"##,
            MARGIN - 12.0,
            fill(*c),
            c.0
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn planar_surface(sphere: &Sphere) -> Option<&Hypersphere> {
    match sphere {
        Sphere::Hyper(h) => Some(h),
        Sphere::Sub(s) => s.as_hypersphere(),
    }
}

fn draw_sphere(out: &mut String, frame: &Frame, h: &Hypersphere) {
    let style = r##"fill="none" stroke="#000000" stroke-width="2" stroke-dasharray="6 3""##;
    if h.is_hyperplane() {
        let b: Vec<f64> = h.b().iter().map(|s| s.to_f64()).collect();
        let a = h.a().to_f64();
        let nn = b[0] * b[0] + b[1] * b[1];
        let p0 = [-a * b[0] / nn, -a * b[1] / nn];
        let len = nn.sqrt();
        let d = [-b[1] / len, b[0] / len];
        let reach = 4.0 * SIZE / frame.scale;
        let _ = writeln!(
            out,
            r#"<line clip-path="url(#plot)" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" {style}/>"#,
            frame.x(p0[0] - reach * d[0]),
            frame.y(p0[1] - reach * d[1]),
            frame.x(p0[0] + reach * d[0]),
            frame.y(p0[1] + reach * d[1]),
        );
    } else if let (Some(c), Some(r2)) = (h.center(), h.radius_sq()) {
        let _ = writeln!(
            out,
            r#"<circle clip-path="url(#plot)" cx="{:.3}" cy="{:.3}" r="{:.3}" {style}/>"#,
            frame.x(c[0].to_f64()),
            frame.y(c[1].to_f64()),
            r2.to_f64().sqrt() * frame.scale,
        );
    }
}
