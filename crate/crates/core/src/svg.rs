//! SVG figures of a half-area polygon with its principal lines and
//! envelopes.

use std::fmt::Write;

use crate::envelope::EnvelopeSet;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::halfarea::HalfAreaPolygon;

pub const POLYGON_COLOR: &str = "#000";
pub const PRINCIPAL_COLOR: &str = "#999";
pub const M_COLOR: &str = "#d62728";
pub const E_COLOR: &str = "#1f77b4";
pub const H_COLOR: &str = "#ff7f0e";
pub const CUSP_COLOR: &str = "#d62728";
pub const CUSP_RADIUS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    pub width: u32,
    pub height: u32,
    pub margin_fraction: f64,
    pub polygon: bool,
    pub principal_lines: bool,
    pub midpoints: bool,
    pub discrete: bool,
    pub hyperbolic: bool,
    pub cusp_markers: bool,
    pub legend: bool,
    /// Points per rendered hyperbolic arc.
    pub arc_samples: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            width: 800,
            height: 800,
            margin_fraction: 0.05,
            polygon: true,
            principal_lines: true,
            midpoints: true,
            discrete: true,
            hyperbolic: true,
            cusp_markers: true,
            legend: true,
            arc_samples: crate::envelope::ARC_SAMPLES,
        }
    }
}

impl RenderOptions {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidConfig(
                "width and height must be positive".into(),
            ));
        }
        if self.arc_samples < 2 {
            return Err(Error::InvalidConfig("arc_samples must be >= 2".into()));
        }
        if !(0.0..0.5).contains(&self.margin_fraction) {
            return Err(Error::InvalidConfig(
                "margin_fraction must be in [0, 0.5)".into(),
            ));
        }
        Ok(())
    }
}

/// World-to-screen map: uniform scale, centered, y flipped.
struct View {
    scale: f64,
    ox: f64,
    oy: f64,
}

impl View {
    fn fit(points: &[Point], opts: &RenderOptions) -> View {
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for p in points {
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
        let (w, h) = (opts.width as f64, opts.height as f64);
        let avail_w = w * (1.0 - 2.0 * opts.margin_fraction);
        let avail_h = h * (1.0 - 2.0 * opts.margin_fraction);
        let (dx, dy) = (
            (x1 - x0).max(f64::MIN_POSITIVE),
            (y1 - y0).max(f64::MIN_POSITIVE),
        );
        let scale = (avail_w / dx).min(avail_h / dy);
        View {
            scale,
            ox: 0.5 * w - 0.5 * (x0 + x1) * scale,
            oy: 0.5 * h + 0.5 * (y0 + y1) * scale,
        }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (self.ox + p.x * self.scale, self.oy - p.y * self.scale)
    }
}

fn points_attr(view: &View, pts: &[Point]) -> String {
    let mut s = String::new();
    for (k, p) in pts.iter().enumerate() {
        let (x, y) = view.map(*p);
        if k > 0 {
            s.push(' ');
        }
        write!(s, "{x:.3},{y:.3}").unwrap();
    }
    s
}

fn closed(pts: &[Point]) -> Vec<Point> {
    let mut v = pts.to_vec();
    if let Some(first) = pts.first() {
        v.push(*first);
    }
    v
}

/// Renders the figure. Output depends only on the inputs.
pub fn render_svg(h: &HalfAreaPolygon, env: &EnvelopeSet, opts: &RenderOptions) -> Result<String> {
    opts.validate()?;
    let n = h.n();
    let verts = h.polygon().vertices();
    let arcs: Vec<Vec<Point>> = env
        .arcs
        .iter()
        .map(|a| a.sample(opts.arc_samples))
        .collect();

    let mut extent: Vec<Point> = verts.to_vec();
    extent.extend(&env.midpoints);
    extent.extend(&env.discrete);
    extent.extend(arcs.iter().flatten());
    let view = View::fit(&extent, opts);

    let mut s = String::new();
    let (w, ht) = (opts.width, opts.height);
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{ht}" viewBox="0 0 {w} {ht}">"#
    )
    .unwrap();
    writeln!(s, r##"<rect width="{w}" height="{ht}" fill="#fff"/>"##).unwrap();

    if opts.polygon {
        writeln!(
            s,
            r#"<polygon class="polygon" points="{}" fill="none" stroke="{POLYGON_COLOR}" stroke-width="1.5"/>"#,
            points_attr(&view, verts)
        )
        .unwrap();
    }
    if opts.principal_lines {
        for i in 0..n {
            let (x1, y1) = view.map(h.vertex(i));
            let (x2, y2) = view.map(h.vertex(i + n));
            writeln!(
                s,
                r#"<line class="principal-line" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{PRINCIPAL_COLOR}" stroke-dasharray="6 4" stroke-width="1"/>"#
            )
            .unwrap();
        }
    }
    if opts.hyperbolic {
        for arc in &arcs {
            writeln!(
                s,
                r#"<polyline class="h-arc" points="{}" fill="none" stroke="{H_COLOR}" stroke-width="2"/>"#,
                points_attr(&view, arc)
            )
            .unwrap();
        }
    }
    if opts.discrete {
        writeln!(
            s,
            r#"<polyline class="e-envelope" points="{}" fill="none" stroke="{E_COLOR}" stroke-width="1.5"/>"#,
            points_attr(&view, &closed(&env.discrete))
        )
        .unwrap();
        for p in &env.discrete {
            let (x, y) = view.map(*p);
            writeln!(
                s,
                r#"<circle class="e-vertex" cx="{x:.3}" cy="{y:.3}" r="2" fill="{E_COLOR}"/>"#
            )
            .unwrap();
        }
    }
    if opts.midpoints {
        writeln!(
            s,
            r#"<polyline class="m-envelope" points="{}" fill="none" stroke="{M_COLOR}" stroke-width="1.5"/>"#,
            points_attr(&view, &closed(&env.midpoints))
        )
        .unwrap();
        for p in &env.midpoints {
            let (x, y) = view.map(*p);
            writeln!(
                s,
                r#"<circle class="m-vertex" cx="{x:.3}" cy="{y:.3}" r="2" fill="{M_COLOR}"/>"#
            )
            .unwrap();
        }
    }
    if opts.cusp_markers {
        for (i, _) in env
            .cusp_flags
            .iter()
            .take(n)
            .enumerate()
            .filter(|(_, f)| **f)
        {
            let (x, y) = view.map(env.midpoints[i]);
            writeln!(
                s,
                r#"<circle class="cusp" cx="{x:.3}" cy="{y:.3}" r="{CUSP_RADIUS}" fill="{CUSP_COLOR}"/>"#
            )
            .unwrap();
        }
    }
    if opts.legend {
        write_legend(&mut s, opts);
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn write_legend(s: &mut String, opts: &RenderOptions) {
    let entries = [
        ("polygon", POLYGON_COLOR, ""),
        (
            "principal lines",
            PRINCIPAL_COLOR,
            r#" stroke-dasharray="6 4""#,
        ),
        ("M (midpoints)", M_COLOR, ""),
        ("E (discrete)", E_COLOR, ""),
        ("H (hyperbolic)", H_COLOR, ""),
    ];
    let x = 8.0_f64.min(opts.width as f64 * opts.margin_fraction);
    writeln!(
        s,
        r#"<g class="legend" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    for (k, (label, color, dash)) in entries.iter().enumerate() {
        let y = 16.0 + 16.0 * k as f64;
        writeln!(
            s,
            r#"<line x1="{x:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-width="2"{dash}/>"#,
            y - 4.0,
            x + 20.0,
            y - 4.0
        )
        .unwrap();
        writeln!(
            s,
            r##"<text x="{:.1}" y="{y:.1}" fill="#000">{label}</text>"##,
            x + 26.0
        )
        .unwrap();
    }
    let y = 16.0 + 16.0 * entries.len() as f64;
    writeln!(
        s,
        r#"<circle cx="{:.1}" cy="{:.1}" r="{CUSP_RADIUS}" fill="{CUSP_COLOR}"/>"#,
        x + 10.0,
        y - 4.0
    )
    .unwrap();
    writeln!(
        s,
        r##"<text x="{:.1}" y="{y:.1}" fill="#000">cusp</text>"##,
        x + 26.0
    )
    .unwrap();
    s.push_str("</g>\n");
}
