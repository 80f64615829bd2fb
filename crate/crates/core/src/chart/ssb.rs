use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::svg::Group;
use super::{
    grid_layer, grid_positions, marker_layer, power_label, prepare, ChartSpec, Emphasis, GridMark,
    Layer, LayerName,
};
use crate::color::OmcPalette;
use crate::datagen::Series;
use crate::error::{Error, Result};
use crate::magnitude::MagnitudeRange;
use crate::math;

/// Gap between neighbouring bars, in pixels.
pub const BAR_GAP: f64 = 1.0;

/// Bar height on each stacked scale `[0, 10^(e_min + k + 1)]`, or `None`
/// where the value exceeds the scale top.
pub fn ssb_fractions(value: f64, range: MagnitudeRange) -> Result<Vec<Option<f64>>> {
    if !range.contains(value) {
        return Err(Error::OutOfRange {
            value,
            low: range.bottom(),
            high: range.top(),
        });
    }
    Ok(range
        .exponents()
        .map(|k| {
            let top = math::pow10(k + 1);
            (top >= value).then(|| value / top)
        })
        .collect())
}

/// Scale-stack bar chart: one linear sub-plot per decade, smallest scale at
/// the bottom, every sample drawn on each scale it fits.
pub fn render_ssb(series: &Series, spec: &ChartSpec, palette: &OmcPalette) -> Result<Vec<Layer>> {
    let frame = prepare(series, spec, palette)?;
    let decades = spec.range.decades();
    let sub_height = frame.plot_height() / decades as f64;
    let slot = frame.plot_width() / series.len() as f64;
    let bar_width = (slot - BAR_GAP).max(0.5);

    let mut data = Group::default();
    for (i, &value) in series.values.iter().enumerate() {
        for (k, fraction) in ssb_fractions(value, spec.range)?.into_iter().enumerate() {
            let Some(fraction) = fraction else { continue };
            let bottom = frame.y1 - sub_height * k as f64;
            let height = fraction * sub_height;
            let attrs = format!(r##"class="ssb-bar" data-scale="{k}" fill="#4d4d4d""##);
            data.rect(
                frame.x0 + slot * i as f64 + BAR_GAP / 2.0,
                bottom - height,
                bar_width,
                height,
                &attrs,
            );
        }
    }

    let marks: Vec<GridMark> = grid_positions(spec.range, spec.design)
        .into_iter()
        .map(|line| GridMark {
            y: frame.y_of(line.y),
            emphasis: line.emphasis,
            label: match (line.emphasis, line.exponent) {
                (Emphasis::Major, Some(k)) if k == spec.range.e_min() => Some("0".to_string()),
                (Emphasis::Major, Some(k)) => Some(power_label(k)),
                _ => None,
            },
            decades: match line.emphasis {
                Emphasis::Minor => line.exponent.into_iter().collect(),
                Emphasis::Major => Vec::new(),
            },
        })
        .collect();

    let mut layers = Vec::with_capacity(3);
    layers.push(Layer::new(LayerName::Data, data));
    layers.push(grid_layer(&frame, &marks));
    layers.extend(marker_layer(
        &frame,
        &spec.markers,
        &frame.slot_xs(series.len()),
    ));
    Ok(layers)
}
