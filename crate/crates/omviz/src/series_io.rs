//! Series files (CSV `index,value` or a JSON array), dataset sidecars and palettes.

use std::fs;
use std::path::{Path, PathBuf};

use omviz_core::{MagnitudeRange, OmcPalette, Series, SeriesKind};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Provenance written next to every generated series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub seed: Option<u64>,
    pub kind: SeriesKind,
    pub range: MagnitudeRange,
    pub n: usize,
    /// Samples replaced after generation, as `(index, value)`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub overrides: Vec<(usize, f64)>,
}

impl DatasetManifest {
    pub fn of(series: &Series) -> Self {
        DatasetManifest {
            seed: series.seed,
            kind: series.kind,
            range: series.range,
            n: series.len(),
            overrides: Vec::new(),
        }
    }
}

/// `walk.csv` -> `walk.manifest.json`.
pub fn sidecar_path(series_path: &Path) -> PathBuf {
    series_path.with_extension("manifest.json")
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    write_bytes(path, text.as_bytes())
}

fn is_json(path: &Path, text: &str) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
        || text.trim_start().starts_with('[')
}

/// Parses series values, reporting every malformed row rather than the first.
pub fn parse_values(path: &Path, text: &str) -> Result<Vec<f64>> {
    if is_json(path, text) {
        return serde_json::from_str(text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        });
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    if headers != vec!["index", "value"] {
        return Err(Error::Rows {
            path: path.to_path_buf(),
            problems: vec![format!(
                "header must be 'index,value', found '{}'",
                headers.iter().collect::<Vec<_>>().join(",")
            )],
        });
    }
    let mut values = Vec::new();
    let mut problems = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let line = row + 2;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                problems.push(format!("line {line}: {e}"));
                continue;
            }
        };
        match (record[0].parse::<usize>(), record[1].parse::<f64>()) {
            (Ok(index), Ok(value)) if index == row && value.is_finite() && value > 0.0 => {
                values.push(value)
            }
            (Ok(index), Ok(value)) if index == row => problems.push(format!(
                "line {line}: value {value} is not a positive number"
            )),
            (Ok(index), Ok(_)) => {
                problems.push(format!("line {line}: index {index} out of sequence"))
            }
            (Err(_), _) => problems.push(format!(
                "line {line}: index '{}' is not an integer",
                &record[0]
            )),
            (_, Err(_)) => problems.push(format!(
                "line {line}: value '{}' is not a number",
                &record[1]
            )),
        }
    }
    if problems.is_empty() {
        Ok(values)
    } else {
        Err(Error::Rows {
            path: path.to_path_buf(),
            problems,
        })
    }
}

pub fn read_series(path: &Path, range: MagnitudeRange) -> Result<Series> {
    let text = read_text(path)?;
    let values = parse_values(path, &text)?;
    Ok(Series::imported(values, range)?)
}

/// CSV text with shortest round-trip float formatting, so re-reading is exact.
pub fn series_csv(series: &Series) -> String {
    let mut out = String::from("index,value\n");
    for (i, v) in series.values.iter().enumerate() {
        out.push_str(&format!("{i},{v}\n"));
    }
    out
}

/// Writes the series as CSV, or as a JSON array when the path ends in `.json`,
/// plus its manifest sidecar.
pub fn write_series(path: &Path, series: &Series, manifest: &DatasetManifest) -> Result<()> {
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
    {
        write_json(path, &series.values)?;
    } else {
        write_bytes(path, series_csv(series).as_bytes())?;
    }
    write_json(&sidecar_path(path), manifest)
}

pub fn read_palette(path: &Path) -> Result<OmcPalette> {
    let palette: OmcPalette = read_json(path)?;
    palette.validate()?;
    Ok(palette)
}
