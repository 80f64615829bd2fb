use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::svg::Group;
use super::{
    area_polygon, grid_layer, legend_layer, marker_layer, prepare, value_label, ChartSpec,
    Emphasis, GridMark, Layer, LayerName,
};
use crate::color::{horizon_band_color, OmcPalette};
use crate::datagen::Series;
use crate::error::Result;

/// Fill fraction of each of `n_bands` equal bands over [0, max]:
/// `clamp(value * n / max - i, 0, 1)` for band `i`.
pub fn horizon_band_fractions(value: f64, max: f64, n_bands: usize) -> Vec<f64> {
    let scaled = value * n_bands as f64 / max;
    (0..n_bands)
        .map(|i| (scaled - i as f64).clamp(0.0, 1.0))
        .collect()
}

/// Classic horizon graph: a linear scale over [0, max(series)] cut into
/// `spec.n_bands` bands, overplotted in one row with darker bands on top.
pub fn render_horizon(
    series: &Series,
    spec: &ChartSpec,
    palette: &OmcPalette,
) -> Result<Vec<Layer>> {
    let frame = prepare(series, spec, palette)?;
    let n = spec.n_bands;
    let max = series.max();
    let band_height = max / n as f64;
    let xs = frame.line_xs(series.len());
    let fractions: Vec<Vec<f64>> = series
        .values
        .iter()
        .map(|&v| horizon_band_fractions(v, max, n))
        .collect();

    let mut bands = Group::default();
    let mut legend_rows = Vec::with_capacity(n);
    for band in 0..n {
        let color = horizon_band_color(band, n)?.to_hex();
        let heights: Vec<f64> = fractions.iter().map(|f| f[band]).collect();
        let polygon = area_polygon(&xs, &heights, frame.y0, frame.y1, &frame);
        let attrs = format!(r#"class="band" data-band="{band}" fill="{color}" stroke="none""#);
        bands.points("polygon", &polygon, &attrs);
        let low = value_label(band_height * band as f64);
        let high = value_label(band_height * (band + 1) as f64);
        legend_rows.push((alloc::vec![color], format!("{low} - {high}")));
    }
    legend_rows.reverse();

    let marks = [
        GridMark {
            y: frame.y1,
            emphasis: Emphasis::Major,
            label: Some("0".to_string()),
            decades: Vec::new(),
        },
        GridMark {
            y: frame.y_of(0.5),
            emphasis: Emphasis::Minor,
            label: None,
            decades: Vec::new(),
        },
        GridMark {
            y: frame.y0,
            emphasis: Emphasis::Major,
            label: Some(value_label(band_height)),
            decades: Vec::new(),
        },
    ];

    let mut layers = Vec::with_capacity(4);
    layers.push(Layer::new(LayerName::Bands, bands));
    layers.push(grid_layer(&frame, &marks));
    layers.extend(marker_layer(&frame, &spec.markers, &xs));
    if spec.show_legend {
        let title = format!("Value (max {})", value_label(max));
        layers.push(legend_layer(&frame, &title, &legend_rows));
    }
    Ok(layers)
}
