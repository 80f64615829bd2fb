use alloc::format;
use alloc::vec::Vec;

use super::svg::Group;
use super::{
    decade_caption, grid_layer, legend_layer, line_points, marker_layer, prepare,
    shared_scale_marks, ChartSpec, Layer, LayerName, LINE_STYLE,
};
use crate::color::{omc_color, OmcPalette};
use crate::datagen::Series;
use crate::error::Result;
use crate::magnitude::MagnitudeValue;

/// Polyline on the piecewise scale over an area filled with one OMC-colored
/// slab per sample. Slab `i` spans the midpoints to its neighbours and
/// follows the line on top, so slabs tile the area under the polyline and the
/// hue switches exactly at the first sample of a new decade.
pub fn render_oml(series: &Series, spec: &ChartSpec, palette: &OmcPalette) -> Result<Vec<Layer>> {
    let frame = prepare(series, spec, palette)?;
    let points = line_points(&frame, series, spec)?;
    let xs = frame.line_xs(series.len());
    let mut data = Group::default();
    for (i, &value) in series.values.iter().enumerate() {
        let mv = spec.range.locate(value)?;
        let color = omc_color(&mv, palette, spec.range)?.to_hex();
        let attrs = format!(
            r#"class="omc-slab" data-exponent="{}" fill="{color}" stroke="none""#,
            mv.exponent
        );
        if series.len() == 1 {
            let y = points[0].1;
            data.rect(frame.x0, y, frame.plot_width(), frame.y1 - y, &attrs);
            continue;
        }
        let y = points[i].1;
        let (left, y_left) = if i == 0 {
            (xs[0], y)
        } else {
            ((xs[i - 1] + xs[i]) / 2.0, (points[i - 1].1 + y) / 2.0)
        };
        let (right, y_right) = if i + 1 == xs.len() {
            (xs[i], y)
        } else {
            ((xs[i] + xs[i + 1]) / 2.0, (y + points[i + 1].1) / 2.0)
        };
        let slab = [
            (left, frame.y1),
            (left, y_left),
            (xs[i], y),
            (right, y_right),
            (right, frame.y1),
        ];
        data.points("polygon", &slab, &attrs);
    }
    data.points("polyline", &points, LINE_STYLE);

    let mut layers = Vec::with_capacity(4);
    layers.push(Layer::new(LayerName::Data, data));
    layers.push(grid_layer(
        &frame,
        &shared_scale_marks(&frame, spec.range, spec.design),
    ));
    layers.extend(marker_layer(&frame, &spec.markers, &xs));
    if spec.show_legend {
        let rows = spec
            .range
            .exponents()
            .rev()
            .map(|k| {
                let colors = (1..=9)
                    .map(|m| {
                        let mv = MagnitudeValue {
                            value: m as f64 * crate::math::pow10(k),
                            mantissa: m as f64,
                            exponent: k,
                        };
                        omc_color(&mv, palette, spec.range).map(|c| c.to_hex())
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((colors, decade_caption(k)))
            })
            .collect::<Result<Vec<_>>>()?;
        layers.push(legend_layer(&frame, "Order of magnitude", &rows));
    }
    Ok(layers)
}
