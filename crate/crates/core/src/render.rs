//! SVG output: swatch sheets, pie charts, Lab scatter plots and contrast
//! curves.
//!
//! Documents are SVG 1.1, UTF-8, LF line endings. Every color is written as
//! a lowercase `#rrggbb` literal. Elements that tests and downstream tools
//! need to read back carry attributes in the `pal:` namespace.

use std::fmt::Write as _;

use crate::color_space::{lab_to_srgb, LabColor, WhitePoint};
use crate::error::{Error, Result};
use crate::evaluation::ContrastReport;
use crate::schemes::{Palette, Scheme};

pub const PAL_NAMESPACE: &str = "urn:eqpal:svg";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvgDocument {
    pub width: u32,
    pub height: u32,
    pub body: String,
}

impl SvgDocument {
    pub fn as_str(&self) -> &str {
        &self.body
    }
}

impl std::fmt::Display for SvgDocument {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.body)
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

struct Canvas {
    width: u32,
    height: u32,
    out: String,
}

impl Canvas {
    fn new(width: u32, height: u32, comment: &str) -> Self {
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:pal=\"{PAL_NAMESPACE}\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
        );
        if !comment.is_empty() {
            let _ = writeln!(out, "<!-- {} -->", comment.replace("--", "- -"));
        }
        Self { width, height, out }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.out.push_str(s.as_ref());
        self.out.push('\n');
    }

    fn background(&mut self, fill: &str) {
        let (w, h) = (self.width, self.height);
        self.line(format!(
            "<rect class=\"background\" x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"{fill}\"/>"
        ));
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, fill: &str, size: u32, text: &str) {
        self.line(format!(
            "<text x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"{anchor}\" font-family=\"sans-serif\" font-size=\"{size}\" fill=\"{fill}\">{}</text>",
            escape(text)
        ));
    }

    fn finish(mut self) -> SvgDocument {
        self.out.push_str("</svg>\n");
        SvgDocument {
            width: self.width,
            height: self.height,
            body: self.out,
        }
    }
}

/// Hex of mid-gray Lab(50, 0, 0), the canvas color behind swatches and pies.
pub fn mid_gray_hex() -> String {
    lab_to_srgb(LabColor::MID_GRAY, WhitePoint::D65).0.to_hex()
}

/// Black or white, whichever reads better on `lab`.
fn label_color(lab: &LabColor) -> &'static str {
    if lab.l() > 55.0 {
        "#000000"
    } else {
        "#ffffff"
    }
}

fn palette_comment(p: &Palette) -> String {
    let spec = p.spec();
    format!(
        "scheme={} n={} seed={} gamut_mode={}",
        spec.scheme,
        spec.n,
        spec.seed,
        spec.gamut_mode.name()
    )
}

pub mod swatch_layout {
    pub const MARGIN: f64 = 16.0;
    pub const WIDTH: f64 = 112.0;
    pub const HEIGHT: f64 = 72.0;
    pub const GAP: f64 = 8.0;
}

/// Grid of labeled color rectangles, row-major in palette order.
pub fn render_swatches(p: &Palette, columns: usize) -> SvgDocument {
    use swatch_layout::*;

    let columns = columns.max(1).min(p.len().max(1));
    let rows = p.len().div_ceil(columns);
    let width = 2.0 * MARGIN + columns as f64 * WIDTH + (columns - 1) as f64 * GAP;
    let height = 2.0 * MARGIN + rows as f64 * HEIGHT + rows.saturating_sub(1) as f64 * GAP;
    let mut canvas = Canvas::new(width as u32, height as u32, &palette_comment(p));
    canvas.background(&mid_gray_hex());

    for (i, color) in p.colors().iter().enumerate() {
        let (row, col) = (i / columns, i % columns);
        let x = MARGIN + col as f64 * (WIDTH + GAP);
        let y = MARGIN + row as f64 * (HEIGHT + GAP);
        let hex = color.hex();
        canvas.line(format!(
            "<rect class=\"swatch\" pal:index=\"{i}\" x=\"{x:.2}\" y=\"{y:.2}\" width=\"{WIDTH:.2}\" height=\"{HEIGHT:.2}\" fill=\"{hex}\"/>"
        ));
        canvas.text(
            x + 6.0,
            y + HEIGHT - 8.0,
            "start",
            label_color(&color.lab),
            12,
            &format!("{i} {hex}"),
        );
    }
    canvas.finish()
}

pub mod pie_layout {
    pub const SIZE: u32 = 480;
    pub const CENTER: f64 = 240.0;
    pub const RADIUS: f64 = 200.0;
}

/// Point on the pie rim at `degrees` clockwise from 12 o'clock.
fn rim_point(degrees: f64) -> (f64, f64) {
    use pie_layout::*;
    let t = degrees.to_radians();
    (CENTER + RADIUS * t.sin(), CENTER - RADIUS * t.cos())
}

/// Sector sweeps in degrees, proportional to `weights` (equal by default).
pub fn pie_sweeps(count: usize, weights: Option<&[f64]>) -> Result<Vec<f64>> {
    let weights: Vec<f64> = match weights {
        None => vec![1.0; count],
        Some(w) if w.len() != count => {
            return Err(Error::invalid(format!(
                "{} weights for {count} colors",
                w.len()
            )))
        }
        Some(w) => {
            if let Some(bad) = w.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
                return Err(Error::invalid(format!(
                    "pie weights must be positive, got {bad}"
                )));
            }
            w.to_vec()
        }
    };
    let total: f64 = weights.iter().sum();
    Ok(weights.iter().map(|w| 360.0 * w / total).collect())
}

/// Full pie, one sector per color in palette order, starting at 12 o'clock
/// and running clockwise.
pub fn render_pie(p: &Palette, weights: Option<&[f64]>) -> Result<SvgDocument> {
    use pie_layout::*;

    let sweeps = pie_sweeps(p.len(), weights)?;
    let gray = mid_gray_hex();
    let mut canvas = Canvas::new(SIZE, SIZE, &palette_comment(p));
    canvas.background(&gray);

    let mut start = 0.0;
    for (i, (color, sweep)) in p.colors().iter().zip(&sweeps).enumerate() {
        let hex = color.hex();
        if p.len() == 1 {
            canvas.line(format!(
                "<circle class=\"sector\" pal:index=\"0\" pal:start=\"0\" pal:sweep=\"360\" cx=\"{CENTER:.3}\" cy=\"{CENTER:.3}\" r=\"{RADIUS:.3}\" fill=\"{hex}\"/>"
            ));
            break;
        }
        let (x0, y0) = rim_point(start);
        let (x1, y1) = rim_point(start + sweep);
        let large = if *sweep > 180.0 { 1 } else { 0 };
        canvas.line(format!(
            "<path class=\"sector\" pal:index=\"{i}\" pal:start=\"{start}\" pal:sweep=\"{sweep}\" d=\"M {CENTER:.3} {CENTER:.3} L {x0:.3} {y0:.3} A {RADIUS:.3} {RADIUS:.3} 0 {large} 1 {x1:.3} {y1:.3} Z\" fill=\"{hex}\" stroke=\"{gray}\" stroke-width=\"0.5\"/>"
        ));
        start += sweep;
    }
    Ok(canvas.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    /// Looking down the L axis: x = a, y = b.
    AbPlane,
    /// Orthographic view from 45° azimuth and 30° elevation, L pointing up.
    ThreeQuarter,
}

pub mod scatter_layout {
    pub const SIZE: u32 = 480;
    pub const ORIGIN: f64 = 240.0;
    /// Pixels per Lab unit.
    pub const SCALE: f64 = 200.0 / 128.0;
    pub const DOT_RADIUS: f64 = 7.0;
    pub const AZIMUTH_DEG: f64 = 45.0;
    pub const ELEVATION_DEG: f64 = 30.0;
}

impl Projection {
    /// Screen offset of Lab coordinates relative to mid-gray, in Lab units
    /// (x right, y up), plus a depth value (larger is nearer the viewer).
    fn project_offset(&self, lab: [f64; 3]) -> (f64, f64, f64) {
        use scatter_layout::*;
        let (l, a, b) = (lab[0] - 50.0, lab[1], lab[2]);
        match self {
            Projection::AbPlane => (a, b, l),
            Projection::ThreeQuarter => {
                let (sa, ca) = AZIMUTH_DEG.to_radians().sin_cos();
                let (se, ce) = ELEVATION_DEG.to_radians().sin_cos();
                let x = a * ca - b * sa;
                let depth = a * sa + b * ca;
                (x, l * ce - depth * se, depth * ce + l * se)
            }
        }
    }

    /// Pixel position of a Lab point on the scatter canvas.
    pub fn to_pixels(&self, lab: [f64; 3]) -> (f64, f64) {
        use scatter_layout::*;
        let (x, y, _) = self.project_offset(lab);
        (ORIGIN + SCALE * x, ORIGIN - SCALE * y)
    }
}

/// Palette colors as dots at their projected Lab positions, each filled with
/// its own color.
pub fn render_lab_scatter(p: &Palette, projection: Projection) -> SvgDocument {
    use scatter_layout::*;

    let mut canvas = Canvas::new(SIZE, SIZE, &palette_comment(p));
    canvas.background("#ffffff");
    let axis = |canvas: &mut Canvas, from: [f64; 3], to: [f64; 3], label: &str| {
        let (x0, y0) = projection.to_pixels(from);
        let (x1, y1) = projection.to_pixels(to);
        canvas.line(format!(
            "<line class=\"axis\" x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y1:.2}\" stroke=\"#888888\" stroke-width=\"1\"/>"
        ));
        canvas.text(x1 + 4.0, y1 - 4.0, "start", "#333333", 14, label);
    };
    axis(&mut canvas, [50.0, -128.0, 0.0], [50.0, 127.0, 0.0], "a");
    axis(&mut canvas, [50.0, 0.0, -128.0], [50.0, 0.0, 127.0], "b");
    if projection == Projection::ThreeQuarter {
        axis(&mut canvas, [0.0, 0.0, 0.0], [100.0, 0.0, 0.0], "L");
    }

    // far dots first
    let mut order: Vec<(usize, f64)> = p
        .colors()
        .iter()
        .enumerate()
        .map(|(i, c)| (i, projection.project_offset(c.lab.to_array()).2))
        .collect();
    order.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
    for (i, _) in order {
        let color = &p.colors()[i];
        let (cx, cy) = projection.to_pixels(color.lab.to_array());
        canvas.line(format!(
            "<circle class=\"dot\" pal:index=\"{i}\" cx=\"{cx:.3}\" cy=\"{cy:.3}\" r=\"{DOT_RADIUS:.1}\" fill=\"{}\" stroke=\"#333333\" stroke-width=\"1\"/>",
            color.hex()
        ));
    }
    canvas.finish()
}

pub mod chart_layout {
    pub const WIDTH: u32 = 640;
    pub const HEIGHT: u32 = 400;
    pub const LEFT: f64 = 64.0;
    pub const RIGHT: f64 = 24.0;
    pub const TOP: f64 = 32.0;
    pub const BOTTOM: f64 = 56.0;
}

/// Affine mapping between (n, contrast) and chart pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartScale {
    pub n_min: f64,
    pub n_max: f64,
    pub y_max: f64,
}

impl ChartScale {
    pub fn for_reports(reports: &[ContrastReport]) -> Self {
        let points = reports.iter().flat_map(|r| r.series());
        let (mut n_min, mut n_max, mut c_max) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
        for p in points {
            n_min = n_min.min(p.n as f64);
            n_max = n_max.max(p.n as f64);
            c_max = c_max.max(p.min_contrast);
        }
        if n_max <= n_min {
            n_min -= 1.0;
            n_max += 1.0;
        }
        let threshold = reports.first().map_or(0.0, |r| r.metric().jnd_threshold());
        Self {
            n_min,
            n_max,
            y_max: 1.05 * c_max.max(threshold),
        }
    }

    pub fn x_to_px(&self, n: f64) -> f64 {
        use chart_layout::*;
        let span = f64::from(WIDTH) - LEFT - RIGHT;
        LEFT + span * (n - self.n_min) / (self.n_max - self.n_min)
    }

    pub fn y_to_px(&self, contrast: f64) -> f64 {
        use chart_layout::*;
        let span = f64::from(HEIGHT) - TOP - BOTTOM;
        f64::from(HEIGHT) - BOTTOM - span * contrast / self.y_max
    }

    pub fn px_to_y(&self, px: f64) -> f64 {
        use chart_layout::*;
        let span = f64::from(HEIGHT) - TOP - BOTTOM;
        (f64::from(HEIGHT) - BOTTOM - px) * self.y_max / span
    }
}

fn series_color(scheme: Scheme) -> &'static str {
    match scheme {
        Scheme::Equilibrium => "#1b9e77",
        Scheme::Harmonic => "#d95f02",
    }
}

/// One polyline per report with a dashed line at the JND threshold.
pub fn render_contrast_chart(reports: &[ContrastReport]) -> Result<SvgDocument> {
    use chart_layout::*;

    let Some(first) = reports.first() else {
        return Err(Error::invalid("contrast chart needs at least one report"));
    };
    let metric = first.metric();
    if reports.iter().any(|r| r.metric() != metric) {
        return Err(Error::invalid(
            "all reports in one chart must share a metric",
        ));
    }
    let scale = ChartScale::for_reports(reports);
    let mut canvas = Canvas::new(WIDTH, HEIGHT, &format!("metric={metric}"));
    canvas.background("#ffffff");

    let (x0, x1) = (LEFT, f64::from(WIDTH) - RIGHT);
    let (y0, y1) = (f64::from(HEIGHT) - BOTTOM, TOP);
    canvas.line(format!(
        "<path class=\"frame\" d=\"M {x0:.2} {y1:.2} L {x0:.2} {y0:.2} L {x1:.2} {y0:.2}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>"
    ));
    for k in 0..=5 {
        let value = scale.y_max * f64::from(k) / 5.0;
        let y = scale.y_to_px(value);
        canvas.line(format!(
            "<line class=\"tick\" x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{x0:.2}\" y2=\"{y:.2}\" stroke=\"#333333\" stroke-width=\"1\"/>",
            x0 - 4.0
        ));
        canvas.text(
            x0 - 8.0,
            y + 4.0,
            "end",
            "#333333",
            11,
            &format!("{value:.1}"),
        );
    }
    for n in [scale.n_min, 0.5 * (scale.n_min + scale.n_max), scale.n_max] {
        let x = scale.x_to_px(n);
        canvas.text(
            x,
            y0 + 18.0,
            "middle",
            "#333333",
            11,
            &format!("{}", n.round()),
        );
    }
    canvas.text(
        0.5 * (x0 + x1),
        f64::from(HEIGHT) - 12.0,
        "middle",
        "#000000",
        13,
        "n",
    );
    canvas.text(
        x0,
        TOP - 12.0,
        "start",
        "#000000",
        13,
        &format!("min contrast, {}", metric.label()),
    );

    let threshold = metric.jnd_threshold();
    let jy = scale.y_to_px(threshold);
    canvas.line(format!(
        "<line class=\"jnd\" pal:threshold=\"{threshold}\" x1=\"{x0:.3}\" y1=\"{jy:.3}\" x2=\"{x1:.3}\" y2=\"{jy:.3}\" stroke=\"#666666\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>"
    ));
    canvas.text(
        x1 - 4.0,
        jy - 4.0,
        "end",
        "#666666",
        11,
        &format!("JND = {threshold}"),
    );

    for (k, report) in reports.iter().enumerate() {
        let points: Vec<String> = report
            .series()
            .iter()
            .map(|p| {
                format!(
                    "{:.3},{:.3}",
                    scale.x_to_px(p.n as f64),
                    scale.y_to_px(p.min_contrast)
                )
            })
            .collect();
        let color = series_color(report.scheme());
        canvas.line(format!(
            "<polyline class=\"series\" pal:scheme=\"{}\" points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>",
            report.scheme(),
            points.join(" ")
        ));
        let ly = TOP + 8.0 + 18.0 * k as f64;
        let lx = x1 - 150.0;
        canvas.line(format!(
            "<line class=\"legend\" x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            lx + 24.0
        ));
        canvas.text(
            lx + 30.0,
            ly + 4.0,
            "start",
            "#000000",
            12,
            report.scheme().name(),
        );
    }
    Ok(canvas.finish())
}
