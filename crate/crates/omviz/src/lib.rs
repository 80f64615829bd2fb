//! File formats and command-line front end for `omviz-core`.
//!
//! * [`series_io`]: series CSV/JSON, dataset sidecars, palette files,
//! * [`study_io`]: study manifests, responses and scored CSV, reports,
//! * [`cli`]: the `omviz` command.

#![forbid(unsafe_code)]

pub mod cli;
mod error;
pub mod series_io;
pub mod study_io;

pub use error::{Error, Result};
pub use omviz_core as core;
