use alloc::vec::Vec;

use super::svg::Group;
use super::{
    grid_layer, line_points, marker_layer, prepare, shared_scale_marks, ChartSpec, Layer,
    LayerName, LINE_STYLE,
};
use crate::color::OmcPalette;
use crate::datagen::Series;
use crate::error::Result;

/// Plain polyline on the logarithmic scale; no fill, no color, no legend.
pub fn render_log_line(
    series: &Series,
    spec: &ChartSpec,
    palette: &OmcPalette,
) -> Result<Vec<Layer>> {
    let frame = prepare(series, spec, palette)?;
    let mut data = Group::default();
    data.points("polyline", &line_points(&frame, series, spec)?, LINE_STYLE);

    let mut layers = Vec::with_capacity(3);
    layers.push(Layer::new(LayerName::Data, data));
    layers.push(grid_layer(
        &frame,
        &shared_scale_marks(&frame, spec.range, spec.design),
    ));
    layers.extend(marker_layer(
        &frame,
        &spec.markers,
        &frame.line_xs(series.len()),
    ));
    Ok(layers)
}
