use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::svg::Group;
use super::{
    area_polygon, decade_caption, grid_layer, grid_positions, legend_layer, marker_layer, prepare,
    ChartSpec, Emphasis, GridMark, Layer, LayerName,
};
use crate::color::{omh_band_color, OmcPalette};
use crate::datagen::Series;
use crate::error::Result;
use crate::magnitude::MagnitudeRange;

/// Fill fraction of every decade band: bands below the value's exponent are
/// full, its own band holds `(m - 1) / 9`, bands above are empty.
pub fn omh_band_fractions(value: f64, range: MagnitudeRange) -> Result<Vec<f64>> {
    let mv = range.locate(value)?;
    let own = (mv.exponent - range.e_min()) as usize;
    Ok((0..range.decades())
        .map(|band| match band.cmp(&own) {
            core::cmp::Ordering::Less => 1.0,
            core::cmp::Ordering::Equal => mv.mantissa_fraction(),
            core::cmp::Ordering::Greater => 0.0,
        })
        .collect())
}

/// Order-of-magnitude horizon graph: one band per decade, each folded into
/// the same row and layered in ascending order, so the visible top band
/// gives the exponent by color and the mantissa by height.
pub fn render_omh(series: &Series, spec: &ChartSpec, palette: &OmcPalette) -> Result<Vec<Layer>> {
    let frame = prepare(series, spec, palette)?;
    let decades = spec.range.decades();
    let xs = frame.line_xs(series.len());
    let fractions = series
        .values
        .iter()
        .map(|&v| omh_band_fractions(v, spec.range))
        .collect::<Result<Vec<_>>>()?;

    let mut bands = Group::default();
    let mut legend_rows = Vec::with_capacity(decades);
    for (band, k) in spec.range.exponents().enumerate() {
        let color = omh_band_color(band, palette)?.to_hex();
        let heights: Vec<f64> = fractions.iter().map(|f| f[band]).collect();
        let polygon = area_polygon(&xs, &heights, frame.y0, frame.y1, &frame);
        let attrs = format!(
            r#"class="band" data-band="{band}" data-exponent="{k}" fill="{color}" stroke="none""#
        );
        bands.points("polygon", &polygon, &attrs);
        legend_rows.push((alloc::vec![color], decade_caption(k)));
    }
    legend_rows.reverse();

    // fold the per-decade gridlines into the shared band row
    let mut minor_decades = Vec::new();
    let mut minor_y = 0.0;
    for line in grid_positions(spec.range, spec.design) {
        if line.emphasis == Emphasis::Minor {
            let local = line.y * decades as f64;
            minor_y = local - libm::floor(local);
            minor_decades.extend(line.exponent);
        }
    }
    let marks = [
        GridMark {
            y: frame.y1,
            emphasis: Emphasis::Major,
            label: Some("1".to_string()),
            decades: Vec::new(),
        },
        GridMark {
            y: frame.y_of(minor_y),
            emphasis: Emphasis::Minor,
            label: None,
            decades: minor_decades,
        },
        GridMark {
            y: frame.y0,
            emphasis: Emphasis::Major,
            label: Some("10".to_string()),
            decades: Vec::new(),
        },
    ];

    let mut layers = Vec::with_capacity(4);
    layers.push(Layer::new(LayerName::Bands, bands));
    layers.push(grid_layer(&frame, &marks));
    layers.extend(marker_layer(&frame, &spec.markers, &xs));
    if spec.show_legend {
        layers.push(legend_layer(&frame, "Order of magnitude", &legend_rows));
    }
    Ok(layers)
}
