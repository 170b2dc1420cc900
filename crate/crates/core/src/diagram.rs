//! SVG pictures of the cusp lattice with the short slopes highlighted.
//!
//! The view is the cusp cross-section seen from the cusp: lattice translates
//! `a m + b l` as gray dots, both sign representatives of each short slope
//! as black dots, slopes whose length equals the threshold ringed, and the
//! length-`L` circle dashed. Output is byte-for-byte deterministic.

use std::fmt::Write as _;

use thiserror::Error;

use crate::slope_search::ShortSlopeReport;

/// Minimum on-canvas distance between two lattice points.
pub const MIN_SEPARATION_PX: f64 = 6.0;

/// Blank border around the drawing, leaves room for labels.
pub const MARGIN_PX: f64 = 24.0;

const LATTICE_RADIUS: f64 = 1.5;
const SLOPE_RADIUS: f64 = 3.5;
const RING_RADIUS: f64 = 6.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagramError {
    #[error("lattice extent must be at least 1")]
    EmptyExtent,
    #[error("canvas {width}x{height} is too small to separate lattice points; use at least {min_width}x{min_height}")]
    CanvasTooSmall {
        width: u32,
        height: u32,
        min_width: u32,
        min_height: u32,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagramSpec {
    pub report: ShortSlopeReport,
    /// Draw the circle of radius equal to the threshold.
    pub radius_circle: bool,
    /// Lattice translates with `|a|, |b| <= lattice_extent` are drawn.
    pub lattice_extent: u32,
    pub label_slopes: bool,
    pub width: u32,
    pub height: u32,
}

impl DiagramSpec {
    /// 600x600 canvas, circle and labels on, extent covering every short slope.
    pub fn new(report: ShortSlopeReport) -> Self {
        let reach = report
            .slopes()
            .map(|s| s.a().unsigned_abs().max(s.b().unsigned_abs()))
            .max()
            .unwrap_or(0);
        Self {
            report,
            radius_circle: true,
            lattice_extent: (reach + 1).min(u32::MAX as u64) as u32,
            label_slopes: true,
            width: 600,
            height: 600,
        }
    }
}

/// Mapping from the cusp plane to canvas pixels; `y` points up in the plane
/// and down on the canvas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layout {
    pub origin_x: f64,
    pub origin_y: f64,
    /// Pixels per unit length.
    pub scale: f64,
}

impl Layout {
    pub fn to_canvas(&self, x: f64, y: f64) -> (f64, f64) {
        (self.origin_x + self.scale * x, self.origin_y - self.scale * y)
    }

    pub fn to_plane(&self, px: f64, py: f64) -> (f64, f64) {
        ((px - self.origin_x) / self.scale, (self.origin_y - py) / self.scale)
    }

    pub fn compute(spec: &DiagramSpec) -> Result<Self, DiagramError> {
        if spec.lattice_extent == 0 {
            return Err(DiagramError::EmptyExtent);
        }
        let shape = &spec.report.shape;
        let n = spec.lattice_extent as i64;
        let mut half_x: f64 = 0.0;
        let mut half_y: f64 = 0.0;
        for (a, b) in [(n, n), (n, -n)] {
            let v = shape.translation(a, b);
            half_x = half_x.max(v.x.abs());
            half_y = half_y.max(v.y.abs());
        }
        for s in spec.report.slopes() {
            let v = shape.translation(s.a(), s.b());
            half_x = half_x.max(v.x.abs());
            half_y = half_y.max(v.y.abs());
        }
        if spec.radius_circle {
            half_x = half_x.max(spec.report.threshold);
            half_y = half_y.max(spec.report.threshold);
        }
        let usable_w = spec.width as f64 - 2.0 * MARGIN_PX;
        let usable_h = spec.height as f64 - 2.0 * MARGIN_PX;
        let scale = (usable_w / (2.0 * half_x)).min(usable_h / (2.0 * half_y));
        let needed = MIN_SEPARATION_PX / shape.systole();
        if scale.is_nan() || scale < needed {
            let side = |half: f64| (2.0 * half * needed + 2.0 * MARGIN_PX).ceil() as u32;
            return Err(DiagramError::CanvasTooSmall {
                width: spec.width,
                height: spec.height,
                min_width: side(half_x),
                min_height: side(half_y),
            });
        }
        Ok(Self {
            origin_x: spec.width as f64 / 2.0,
            origin_y: spec.height as f64 / 2.0,
            scale,
        })
    }
}

/// Fixed two-decimal coordinates, without a negative zero.
fn px(v: f64) -> String {
    format!("{:.2}", v + 0.0).replace("-0.00", "0.00")
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

pub fn emit_lattice_svg(spec: &DiagramSpec) -> Result<String, DiagramError> {
    let layout = Layout::compute(spec)?;
    let report = &spec.report;
    let shape = &report.shape;
    let name = shape.name().unwrap_or("cusp");
    let mut svg = String::new();
    let (w, h) = (spec.width, spec.height);

    // `write!` into a String cannot fail
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        svg,
        "<title>Primitive short slopes of {} (L = {})</title>",
        xml_escape(name),
        report.threshold
    );
    let _ = writeln!(
        svg,
        "<desc>{} slopes, {} highlighted lattice points, lattice extent {}</desc>",
        report.len(),
        2 * report.len(),
        spec.lattice_extent
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);

    let n = spec.lattice_extent as i64;
    let _ = writeln!(svg, r##"<g id="lattice" fill="#999999">"##);
    for b in -n..=n {
        for a in -n..=n {
            let v = shape.translation(a, b);
            let (x, y) = layout.to_canvas(v.x, v.y);
            let _ = writeln!(
                svg,
                r#"<circle class="lattice" cx="{}" cy="{}" r="{LATTICE_RADIUS}"/>"#,
                px(x),
                px(y)
            );
        }
    }
    let _ = writeln!(svg, "</g>");

    if spec.radius_circle {
        let (cx, cy) = layout.to_canvas(0.0, 0.0);
        let _ = writeln!(
            svg,
            r##"<circle id="radius" cx="{}" cy="{}" r="{}" fill="none" stroke="#555555" stroke-width="1" stroke-dasharray="6 4"/>"##,
            px(cx),
            px(cy),
            px(layout.scale * report.threshold)
        );
    }

    let _ = writeln!(svg, r##"<g id="slopes" fill="#000000">"##);
    for e in &report.entries {
        for sign in [1, -1] {
            let v = shape.translation(sign * e.slope.a(), sign * e.slope.b());
            let (x, y) = layout.to_canvas(v.x, v.y);
            let _ = writeln!(
                svg,
                r#"<circle class="slope" cx="{}" cy="{}" r="{SLOPE_RADIUS}"/>"#,
                px(x),
                px(y)
            );
        }
    }
    let _ = writeln!(svg, "</g>");

    if report.entries.iter().any(|e| e.boundary) {
        let _ = writeln!(
            svg,
            r##"<g id="boundary" fill="none" stroke="#000000" stroke-width="1">"##
        );
        for e in report.entries.iter().filter(|e| e.boundary) {
            for sign in [1, -1] {
                let v = shape.translation(sign * e.slope.a(), sign * e.slope.b());
                let (x, y) = layout.to_canvas(v.x, v.y);
                let _ = writeln!(
                    svg,
                    r#"<circle class="ring" cx="{}" cy="{}" r="{RING_RADIUS}"/>"#,
                    px(x),
                    px(y)
                );
            }
        }
        let _ = writeln!(svg, "</g>");
    }

    if spec.label_slopes {
        let _ = writeln!(
            svg,
            r##"<g id="labels" font-family="sans-serif" font-size="10" fill="#000000">"##
        );
        for e in &report.entries {
            let v = shape.translation(e.slope.a(), e.slope.b());
            let (x, y) = layout.to_canvas(v.x, v.y);
            let _ = writeln!(
                svg,
                r#"<text x="{}" y="{}">({},{})</text>"#,
                px(x + 5.0),
                px(y - 5.0),
                e.slope.a(),
                e.slope.b()
            );
        }
        let _ = writeln!(svg, "</g>");
    }
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}
