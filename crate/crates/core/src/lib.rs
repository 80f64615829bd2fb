//! Order-of-magnitude charts for time series with large value ranges.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`magnitude`]: mantissa/exponent decomposition and the two shared y scales,
//! * [`color`]: the order-of-magnitude color scheme and band palettes,
//! * [`chart`]: five SVG renderers (log line, OML, horizon, OMH, scale-stack bars),
//! * [`datagen`]: seeded random walks and trend series,
//! * [`study`]: stimulus set construction and response scoring,
//! * [`stats`]: error metrics and nonparametric significance tests.
//!
//! File formats and the command-line front end live in the `omviz` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod chart;
pub mod color;
pub mod datagen;
mod error;
pub mod magnitude;
pub(crate) mod math;
pub mod rng;
pub mod stats;
pub mod study;

pub use chart::{ChartSpec, Design, Marker, RenderedChart};
pub use color::{Hsl, OmcPalette};
pub use datagen::{Series, SeriesKind};
pub use error::{Error, Result};
pub use magnitude::{MagnitudeRange, MagnitudeValue};
