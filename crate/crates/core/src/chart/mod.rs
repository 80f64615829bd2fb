//! Static SVG renderers for the five chart designs.
//!
//! Every chart shares one scaffold: a fixed canvas, a plot frame with
//! decade gridlines (major) and one reduced-opacity mantissa-5 line per
//! decade (minor), tick labels on major lines only, no time labels, marker
//! glyphs outside the plot, and a legend on the color-coded designs. Output
//! is byte-identical for identical inputs.

mod horizon;
mod log_line;
mod omh;
mod oml;
mod ssb;
pub(crate) mod svg;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::color::OmcPalette;
use crate::datagen::Series;
use crate::error::{Error, Result};
use crate::magnitude::{log_y, piecewise_y, MagnitudeRange};
use crate::math;

pub use horizon::{horizon_band_fractions, render_horizon};
pub use log_line::render_log_line;
pub use omh::{omh_band_fractions, render_omh};
pub use oml::render_oml;
pub use ssb::{render_ssb, ssb_fractions};

use svg::Group;

pub const DEFAULT_WIDTH: u32 = 972;
pub const DEFAULT_HEIGHT: u32 = 350;
pub const DEFAULT_HORIZON_BANDS: usize = 3;
/// Stroke opacity of the mantissa-5 gridlines.
pub const MINOR_OPACITY: f64 = 0.35;

const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 16.0;
const LEGEND_WIDTH: f64 = 150.0;
const MARGIN_TOP: f64 = 34.0;
const MARGIN_BOTTOM: f64 = 22.0;
const MARKER_GAP: f64 = 4.0;
const MARKER_STROKE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Design {
    #[serde(rename = "log", alias = "log_line")]
    LogLine,
    #[serde(rename = "oml")]
    Oml,
    #[serde(rename = "horizon")]
    Horizon,
    #[serde(rename = "omh")]
    Omh,
    #[serde(rename = "ssb")]
    Ssb,
}

impl Design {
    /// Table order used in reports.
    pub const ALL: [Design; 5] = [
        Design::LogLine,
        Design::Oml,
        Design::Horizon,
        Design::Omh,
        Design::Ssb,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Design::LogLine => "log",
            Design::Oml => "oml",
            Design::Horizon => "horizon",
            Design::Omh => "omh",
            Design::Ssb => "ssb",
        }
    }

    /// Column heading in the p-value matrices.
    pub fn label(&self) -> &'static str {
        match self {
            Design::LogLine => "Log",
            Design::Oml => "OML",
            Design::Horizon => "Horizon",
            Design::Omh => "OMH",
            Design::Ssb => "SSB",
        }
    }

    /// Designs that encode values with color and therefore carry a legend.
    pub fn is_colored(&self) -> bool {
        matches!(self, Design::Oml | Design::Horizon | Design::Omh)
    }
}

impl fmt::Display for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Design {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log" | "log_line" | "log-line" => Ok(Design::LogLine),
            "oml" => Ok(Design::Oml),
            "horizon" => Ok(Design::Horizon),
            "omh" => Ok(Design::Omh),
            "ssb" => Ok(Design::Ssb),
            other => Err(Error::Usage(format!(
                "unknown design '{other}' (expected log, oml, horizon, omh or ssb)"
            ))),
        }
    }
}

/// Labelled position marked above and below the plot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Marker {
    pub label: char,
    pub index: usize,
}

impl FromStr for Marker {
    type Err = Error;

    /// Parses `LABEL:INDEX`, e.g. `A:10`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("invalid marker '{s}' (expected LABEL:INDEX)"));
        let (label, index) = s.split_once(':').ok_or_else(bad)?;
        let mut chars = label.chars();
        let label = match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_alphanumeric() => c,
            _ => return Err(bad()),
        };
        let index = index.parse().map_err(|_| bad())?;
        Ok(Marker { label, index })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub design: Design,
    pub width_px: u32,
    pub height_px: u32,
    pub markers: Vec<Marker>,
    pub show_legend: bool,
    /// Band count of the classic horizon graph; ignored by other designs.
    pub n_bands: usize,
    pub range: MagnitudeRange,
}

impl ChartSpec {
    pub fn new(design: Design) -> Self {
        Self {
            design,
            width_px: DEFAULT_WIDTH,
            height_px: DEFAULT_HEIGHT,
            markers: Vec::new(),
            show_legend: true,
            n_bands: DEFAULT_HORIZON_BANDS,
            range: MagnitudeRange::STUDY,
        }
    }

    pub fn with_markers(mut self, markers: Vec<Marker>) -> Self {
        self.markers = markers;
        self
    }

    fn legend_shown(&self) -> bool {
        self.show_legend && self.design.is_colored()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayerName {
    Grid,
    Data,
    Bands,
    Markers,
    Legend,
}

impl LayerName {
    pub fn as_str(&self) -> &'static str {
        match self {
            LayerName::Grid => "grid",
            LayerName::Data => "data",
            LayerName::Bands => "bands",
            LayerName::Markers => "markers",
            LayerName::Legend => "legend",
        }
    }
}

/// One named `<g>` group of a chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub name: LayerName,
    pub body: String,
}

impl Layer {
    fn new(name: LayerName, group: Group) -> Self {
        Self {
            name,
            body: group.body,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderedChart {
    pub document: String,
    pub layers: Vec<LayerName>,
}

impl RenderedChart {
    pub fn has_layer(&self, name: LayerName) -> bool {
        self.layers.contains(&name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emphasis {
    Major,
    Minor,
}

/// Gridline in unit plot coordinates (0 = bottom, 1 = top).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridLine {
    pub y: f64,
    pub emphasis: Emphasis,
    /// Decade boundary `10^k` for majors, decade `k` for minors; `None` on
    /// the linear horizon axis.
    pub exponent: Option<i32>,
}

/// Gridlines of a design over `range`.
///
/// Log and piecewise designs put a major line on every decade boundary and a
/// minor line at mantissa 5 inside every decade (OMH returns the unfolded
/// piecewise positions, which the renderer folds into its band row). SSB
/// uses one linear sub-plot per decade with the minor line at half height.
/// The classic horizon graph has a linear axis with one mid-band minor line.
pub fn grid_positions(range: MagnitudeRange, design: Design) -> Vec<GridLine> {
    let decades = range.decades() as f64;
    let mut lines = Vec::with_capacity(2 * range.decades() + 1);
    match design {
        Design::Horizon => {
            lines.push(GridLine {
                y: 0.0,
                emphasis: Emphasis::Major,
                exponent: None,
            });
            lines.push(GridLine {
                y: 0.5,
                emphasis: Emphasis::Minor,
                exponent: None,
            });
            lines.push(GridLine {
                y: 1.0,
                emphasis: Emphasis::Major,
                exponent: None,
            });
        }
        _ => {
            for (i, k) in range.exponents().enumerate() {
                let base = i as f64;
                let minor = match design {
                    Design::LogLine => base + math::log10(5.0),
                    Design::Ssb => base + 0.5,
                    _ => base + 4.0 / 9.0,
                };
                lines.push(GridLine {
                    y: base / decades,
                    emphasis: Emphasis::Major,
                    exponent: Some(k),
                });
                lines.push(GridLine {
                    y: minor / decades,
                    emphasis: Emphasis::Minor,
                    exponent: Some(k),
                });
            }
            lines.push(GridLine {
                y: 1.0,
                emphasis: Emphasis::Major,
                exponent: Some(range.e_max() + 1),
            });
        }
    }
    lines
}

/// Unit y of a value on the design's shared scale (log or piecewise).
pub(crate) fn unit_y(design: Design, value: f64, range: MagnitudeRange) -> Result<f64> {
    match design {
        Design::LogLine => log_y(value, range),
        _ => piecewise_y(value, range),
    }
}

/// Pixel geometry of the canvas and the plot rectangle inside it.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Frame {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Frame {
    fn new(spec: &ChartSpec) -> Result<Self> {
        let width = spec.width_px as f64;
        let height = spec.height_px as f64;
        let right = if spec.legend_shown() {
            LEGEND_WIDTH
        } else {
            MARGIN_RIGHT
        };
        let frame = Frame {
            x0: MARGIN_LEFT,
            x1: width - right,
            y0: MARGIN_TOP,
            y1: height - MARGIN_BOTTOM,
        };
        if frame.plot_width() < 10.0 || frame.plot_height() < 10.0 {
            return Err(Error::InvalidChart(format!(
                "canvas {}x{} leaves no room for the plot",
                spec.width_px, spec.height_px
            )));
        }
        Ok(frame)
    }

    pub fn plot_width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn plot_height(&self) -> f64 {
        self.y1 - self.y0
    }

    /// Pixel y of a unit position within the full plot height.
    pub fn y_of(&self, unit: f64) -> f64 {
        self.y1 - unit * self.plot_height()
    }

    /// Uniform sample positions `x_i = i / (n - 1)` across the plot; a single
    /// sample sits in the middle.
    pub fn line_xs(&self, n: usize) -> Vec<f64> {
        if n == 1 {
            return alloc::vec![(self.x0 + self.x1) / 2.0];
        }
        (0..n)
            .map(|i| self.x0 + self.plot_width() * i as f64 / (n - 1) as f64)
            .collect()
    }

    /// Centres of `n` equal bar slots.
    pub fn slot_xs(&self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| self.x0 + self.plot_width() * (i as f64 + 0.5) / n as f64)
            .collect()
    }
}

/// Gridline ready to draw.
pub(crate) struct GridMark {
    pub y: f64,
    pub emphasis: Emphasis,
    pub label: Option<String>,
    /// Decades a minor line stands for.
    pub decades: Vec<i32>,
}

pub(crate) fn grid_layer(frame: &Frame, marks: &[GridMark]) -> Layer {
    let mut g = Group::default();
    for mark in marks {
        match mark.emphasis {
            Emphasis::Major => g.line(
                frame.x0,
                mark.y,
                frame.x1,
                mark.y,
                r##"class="grid-major" stroke="#808080" stroke-width="1""##,
            ),
            Emphasis::Minor => {
                let mut decades = String::new();
                for (i, k) in mark.decades.iter().enumerate() {
                    if i > 0 {
                        decades.push(' ');
                    }
                    let _ = write!(decades, "{k}");
                }
                let attrs = format!(
                    r##"class="grid-minor" data-decades="{decades}" stroke="#808080" stroke-width="1" stroke-opacity="{MINOR_OPACITY}""##
                );
                g.line(frame.x0, mark.y, frame.x1, mark.y, &attrs);
            }
        }
        if let Some(label) = &mark.label {
            g.text(
                frame.x0 - 6.0,
                mark.y + 4.0,
                r##"class="tick" text-anchor="end" font-family="sans-serif" font-size="11" fill="#333333""##,
                label,
            );
        }
    }
    g.rect(
        frame.x0,
        frame.y0,
        frame.plot_width(),
        frame.plot_height(),
        r##"class="frame" fill="none" stroke="#4d4d4d" stroke-width="1""##,
    );
    Layer::new(LayerName::Grid, g)
}

/// Two short strokes outside the plot, above and below, plus the label above.
pub(crate) fn marker_layer(frame: &Frame, markers: &[Marker], xs: &[f64]) -> Option<Layer> {
    if markers.is_empty() {
        return None;
    }
    let mut g = Group::default();
    let stroke = r##"class="marker-stroke" stroke="#000000" stroke-width="2""##;
    for marker in markers {
        let x = xs[marker.index];
        let top = frame.y0 - MARKER_GAP;
        let bottom = frame.y1 + MARKER_GAP;
        g.line(x, top - MARKER_STROKE, x, top, stroke);
        g.line(x, bottom, x, bottom + MARKER_STROKE, stroke);
        let mut label = String::new();
        label.push(marker.label);
        g.text(
            x,
            top - MARKER_STROKE - 4.0,
            r##"class="marker-label" text-anchor="middle" font-family="sans-serif" font-size="13" font-weight="bold" fill="#000000""##,
            &label,
        );
    }
    Some(Layer::new(LayerName::Markers, g))
}

/// Legend rows: a run of swatch colors followed by a caption.
pub(crate) fn legend_layer(frame: &Frame, title: &str, rows: &[(Vec<String>, String)]) -> Layer {
    let mut g = Group::default();
    let x = frame.x1 + 14.0;
    g.text(
        x,
        frame.y0 + 2.0,
        r##"class="legend-title" font-family="sans-serif" font-size="11" fill="#333333""##,
        title,
    );
    for (row, (colors, caption)) in rows.iter().enumerate() {
        let y = frame.y0 + 10.0 + 20.0 * row as f64;
        let swatch = if colors.len() > 1 {
            54.0 / colors.len() as f64
        } else {
            14.0
        };
        for (i, color) in colors.iter().enumerate() {
            let attrs = format!(r#"class="legend-swatch" fill="{color}""#);
            g.rect(x + swatch * i as f64, y, swatch, 14.0, &attrs);
        }
        g.text(
            x + swatch * colors.len() as f64 + 6.0,
            y + 11.0,
            r##"class="legend-label" font-family="sans-serif" font-size="11" fill="#333333""##,
            caption,
        );
    }
    Layer::new(LayerName::Legend, g)
}

/// Axis label for `10^k`.
pub(crate) fn power_label(k: i32) -> String {
    if (-6..=6).contains(&k) {
        format!("{}", math::pow10(k))
    } else {
        format!("1e{k}")
    }
}

/// Compact legend caption for the decade `[10^k, 10^(k+1))`, e.g. `10³ - 10⁴`.
pub(crate) fn decade_caption(k: i32) -> String {
    format!("{} - {}", superscript_power(k), superscript_power(k + 1))
}

fn superscript_power(k: i32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut out = String::from("10");
    if k < 0 {
        out.push('⁻');
    }
    for d in k.unsigned_abs().to_string().bytes() {
        out.push(DIGITS[(d - b'0') as usize]);
    }
    out
}

pub(crate) fn value_label(v: f64) -> String {
    if v >= 100.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

/// Gridline marks for the designs that draw on one shared unit y scale.
pub(crate) fn shared_scale_marks(
    frame: &Frame,
    range: MagnitudeRange,
    design: Design,
) -> Vec<GridMark> {
    grid_positions(range, design)
        .into_iter()
        .map(|line| GridMark {
            y: frame.y_of(line.y),
            emphasis: line.emphasis,
            label: match (line.emphasis, line.exponent) {
                (Emphasis::Major, Some(k)) => Some(power_label(k)),
                _ => None,
            },
            decades: match (line.emphasis, line.exponent) {
                (Emphasis::Minor, Some(k)) => alloc::vec![k],
                _ => Vec::new(),
            },
        })
        .collect()
}

fn validate(series: &Series, spec: &ChartSpec, palette: &OmcPalette) -> Result<()> {
    if series.is_empty() {
        return Err(Error::InvalidChart("series is empty".to_string()));
    }
    if let Some(&value) = series.values.iter().find(|&&v| !spec.range.contains(v)) {
        return Err(Error::OutOfRange {
            value,
            low: spec.range.bottom(),
            high: spec.range.top(),
        });
    }
    if let Some(m) = spec.markers.iter().find(|m| m.index >= series.len()) {
        return Err(Error::InvalidChart(format!(
            "marker {} at index {} is beyond the {} samples",
            m.label,
            m.index,
            series.len()
        )));
    }
    if spec.width_px == 0 || spec.height_px == 0 {
        return Err(Error::InvalidChart(
            "canvas size must be positive".to_string(),
        ));
    }
    if spec.n_bands == 0 {
        return Err(Error::InvalidChart(
            "horizon graph needs at least one band".to_string(),
        ));
    }
    if matches!(spec.design, Design::Oml | Design::Omh) {
        palette.validate()?;
        if !palette.covers(spec.range) {
            return Err(Error::ExponentOutOfPalette {
                exponent: spec.range.e_min() + palette.len() as i32,
            });
        }
    }
    Ok(())
}

/// Renders `series` as a standalone SVG document.
pub fn render(series: &Series, spec: &ChartSpec, palette: &OmcPalette) -> Result<RenderedChart> {
    let layers = match spec.design {
        Design::LogLine => render_log_line(series, spec, palette)?,
        Design::Oml => render_oml(series, spec, palette)?,
        Design::Horizon => render_horizon(series, spec, palette)?,
        Design::Omh => render_omh(series, spec, palette)?,
        Design::Ssb => render_ssb(series, spec, palette)?,
    };
    let mut document = String::new();
    let _ = write!(
        document,
        concat!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" ",
            "width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" data-design=\"{d}\">\n",
            "<rect id=\"background\" x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>\n"
        ),
        w = spec.width_px,
        h = spec.height_px,
        d = spec.design.as_str()
    );
    for layer in &layers {
        let _ = write!(
            document,
            "<g id=\"{}\">\n{}</g>\n",
            layer.name.as_str(),
            layer.body
        );
    }
    document.push_str("</svg>\n");
    Ok(RenderedChart {
        document,
        layers: layers.iter().map(|l| l.name).collect(),
    })
}

/// Shared prologue of the per-design renderers.
pub(crate) fn prepare(series: &Series, spec: &ChartSpec, palette: &OmcPalette) -> Result<Frame> {
    validate(series, spec, palette)?;
    Frame::new(spec)
}

/// Pixel points of a polyline through the samples on the design's scale.
pub(crate) fn line_points(
    frame: &Frame,
    series: &Series,
    spec: &ChartSpec,
) -> Result<Vec<(f64, f64)>> {
    let xs = frame.line_xs(series.len());
    let mut points = series
        .values
        .iter()
        .zip(&xs)
        .map(|(&v, &x)| Ok((x, frame.y_of(unit_y(spec.design, v, spec.range)?))))
        .collect::<Result<Vec<_>>>()?;
    if points.len() == 1 {
        // a lone sample is drawn as a level line across the plot
        let y = points[0].1;
        points = alloc::vec![(frame.x0, y), (frame.x1, y)];
    }
    Ok(points)
}

/// Closed area between a sampled profile and the plot's bottom edge within
/// a row `[row_top, row_bottom]`. `heights` are fractions of the row height.
pub(crate) fn area_polygon(
    xs: &[f64],
    heights: &[f64],
    row_top: f64,
    row_bottom: f64,
    frame: &Frame,
) -> Vec<(f64, f64)> {
    let row = row_bottom - row_top;
    let (xs, heights): (Vec<f64>, Vec<f64>) = if xs.len() == 1 {
        (
            alloc::vec![frame.x0, frame.x1],
            alloc::vec![heights[0], heights[0]],
        )
    } else {
        (xs.to_vec(), heights.to_vec())
    };
    let mut points = Vec::with_capacity(xs.len() + 2);
    points.push((xs[0], row_bottom));
    for (x, h) in xs.iter().zip(&heights) {
        points.push((*x, row_bottom - h * row));
    }
    points.push((xs[xs.len() - 1], row_bottom));
    points
}

pub(crate) const LINE_STYLE: &str =
    r##"class="series" fill="none" stroke="#1a1a1a" stroke-width="1.5" stroke-linejoin="round""##;
