//! Seeded synthetic series: the constrained random walk and trend templates.
//!
//! Draw layout (part of the fixture contract):
//!
//! * walk: one draw for the start value, then one draw per step for the
//!   mantissa delta;
//! * exponential and periodic trends: one draw per sample for the mantissa;
//! * linear trend: two draws, start value then end value.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magnitude::{compose, MagnitudeRange, MagnitudeValue};
use crate::math;
use crate::rng::StudyRng;

/// Samples per study dataset.
pub const STUDY_LENGTH: usize = 100;
/// Largest mantissa change per walk step.
pub const WALK_STEP: f64 = 2.0;
/// Period, in samples, of the periodic trend template.
pub const PERIODIC_PERIOD: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Walk,
    Periodic,
    Linear,
    Exponential,
    /// Values read from a file rather than generated.
    Imported,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrendKind {
    Periodic,
    Linear,
    Exponential,
}

impl TrendKind {
    pub const ALL: [TrendKind; 3] = [
        TrendKind::Periodic,
        TrendKind::Linear,
        TrendKind::Exponential,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TrendKind::Periodic => "periodic",
            TrendKind::Linear => "linear",
            TrendKind::Exponential => "exponential",
        }
    }
}

impl fmt::Display for TrendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TrendKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(TrendKind::Periodic),
            "linear" => Ok(TrendKind::Linear),
            "exponential" => Ok(TrendKind::Exponential),
            other => Err(Error::Usage(alloc::format!(
                "unknown trend kind '{other}' (expected periodic, linear or exponential)"
            ))),
        }
    }
}

impl From<TrendKind> for SeriesKind {
    fn from(kind: TrendKind) -> Self {
        match kind {
            TrendKind::Periodic => SeriesKind::Periodic,
            TrendKind::Linear => SeriesKind::Linear,
            TrendKind::Exponential => SeriesKind::Exponential,
        }
    }
}

/// An ordered run of positive samples inside a magnitude range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub values: Vec<f64>,
    pub seed: Option<u64>,
    pub range: MagnitudeRange,
    pub kind: SeriesKind,
}

impl Series {
    /// Wraps externally supplied values, checking they are non-empty and in range.
    pub fn imported(values: Vec<f64>, range: MagnitudeRange) -> Result<Self> {
        let series = Series {
            values,
            seed: None,
            range,
            kind: SeriesKind::Imported,
        };
        series.validate()?;
        Ok(series)
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::InvalidChart("series is empty".to_string()));
        }
        if let Some(&value) = self.values.iter().find(|&&v| !self.range.contains(v)) {
            return Err(Error::OutOfRange {
                value,
                low: self.range.bottom(),
                high: self.range.top(),
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn check_length(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Usage("series length must be at least 1".to_string()));
    }
    Ok(())
}

/// Interval the walk starts in: the decade just below the top one, or the
/// whole range when it holds a single decade. [1000, 10000] for the study range.
pub fn walk_start_interval(range: MagnitudeRange) -> (f64, f64) {
    if range.decades() >= 2 {
        let low = compose(1.0, range.e_max() - 1).unwrap_or(range.bottom());
        let high = compose(1.0, range.e_max()).unwrap_or(range.top());
        (low, high)
    } else {
        (range.bottom(), range.top())
    }
}

/// Applies one mantissa step with decade carry and reflection at the range edges.
///
/// The caller's `delta` is added to the mantissa. Leaving [1, 10) converts the
/// result through the value domain (`9.5 + 1.0` becomes `1.05` one decade up).
/// Past the range top the mantissa reflects about 10, past the bottom (or when
/// no positive value exists) it reflects about 1.
pub fn walk_step(state: MagnitudeValue, delta: f64, range: MagnitudeRange) -> MagnitudeValue {
    let mut mantissa = state.mantissa + delta;
    let mut exponent = state.exponent;
    if mantissa >= 10.0 {
        if exponent >= range.e_max() {
            mantissa = 20.0 - mantissa;
        } else {
            // mantissa is in [10, 12): one decade up
            mantissa /= 10.0;
            exponent += 1;
        }
    } else if mantissa < 1.0 {
        let below = math::scale10(mantissa, exponent);
        if mantissa <= 0.0 || exponent <= range.e_min() || below < range.bottom() {
            mantissa = 2.0 - mantissa;
        } else {
            match range.locate(below) {
                Ok(mv) => return mv,
                Err(_) => mantissa = 2.0 - mantissa,
            }
        }
    }
    let value = math::scale10(mantissa, exponent).clamp(range.bottom(), range.top());
    MagnitudeValue {
        value,
        mantissa,
        exponent,
    }
}

/// Constrained random walk: start uniform in [`walk_start_interval`], then
/// `n - 1` mantissa steps uniform in [-2, 2).
pub fn random_walk(seed: u64, n: usize, range: MagnitudeRange) -> Result<Series> {
    check_length(n)?;
    let mut rng = StudyRng::new(seed);
    let (low, high) = walk_start_interval(range);
    let mut state = range.locate(rng.uniform(low, high))?;
    let mut values = Vec::with_capacity(n);
    values.push(state.value);
    for _ in 1..n {
        let delta = rng.uniform(-WALK_STEP, WALK_STEP);
        state = walk_step(state, delta, range);
        values.push(state.value);
    }
    Ok(Series {
        values,
        seed: Some(seed),
        range,
        kind: SeriesKind::Walk,
    })
}

/// Exponent template of the exponential trend: equal runs rising from e_min to e_max.
pub fn exponential_exponent(t: usize, n: usize, range: MagnitudeRange) -> i32 {
    range.e_min() + ((t * range.decades()) / n) as i32
}

/// Exponent template of the periodic trend: a discretized cosine starting at
/// e_min, peaking at e_max half a period later.
pub fn periodic_exponent(t: usize, range: MagnitudeRange) -> i32 {
    let phase = 2.0 * core::f64::consts::PI * (t % PERIODIC_PERIOD) as f64 / PERIODIC_PERIOD as f64;
    let span = (range.decades() - 1) as f64;
    range.e_min() + math::round(span * (1.0 - math::cos(phase)) / 2.0) as i32
}

/// Pseudo-random trend series: the exponent sequence is fixed by `kind` and
/// mantissas are drawn uniformly in [1, 10). The linear kind instead draws a
/// start in [bottom, top/50] and an end in [top/2, top] and interpolates.
pub fn trend_series(kind: TrendKind, seed: u64, n: usize, range: MagnitudeRange) -> Result<Series> {
    check_length(n)?;
    let mut rng = StudyRng::new(seed);
    let values = match kind {
        TrendKind::Exponential | TrendKind::Periodic => (0..n)
            .map(|t| {
                let exponent = match kind {
                    TrendKind::Exponential => exponential_exponent(t, n, range),
                    _ => periodic_exponent(t, range),
                };
                math::scale10(rng.uniform(1.0, 10.0), exponent)
            })
            .collect(),
        TrendKind::Linear => {
            let start = rng.uniform(range.bottom(), range.bottom().max(range.top() / 50.0));
            let end = rng.uniform(range.top() / 2.0, range.top());
            let slope = if n > 1 {
                (end - start) / (n - 1) as f64
            } else {
                0.0
            };
            (0..n)
                .map(|t| (start + slope * t as f64).clamp(range.bottom(), range.top()))
                .collect()
        }
    };
    Ok(Series {
        values,
        seed: Some(seed),
        range,
        kind: kind.into(),
    })
}

/// Coefficient of determination of an ordinary least-squares line through
/// `(t, ys[t])`. Constant input yields 0.
pub fn linear_r_squared(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    if ys.len() < 2 {
        return 0.0;
    }
    let mean_t = (n - 1.0) / 2.0;
    let mean_y = ys.iter().sum::<f64>() / n;
    let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
    for (t, &y) in ys.iter().enumerate() {
        let dt = t as f64 - mean_t;
        let dy = y - mean_y;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    if syy == 0.0 {
        return 0.0;
    }
    (sty * sty) / (stt * syy)
}

/// R² below which neither a linear nor a log-linear fit explains the series.
pub const TREND_FIT_THRESHOLD: f64 = 0.5;

/// Guesses the trend template behind a positive series by comparing a linear
/// fit of the values with a linear fit of their logarithms.
pub fn classify_trend(values: &[f64]) -> TrendKind {
    let linear = linear_r_squared(values);
    let logs: Vec<f64> = values.iter().map(|&v| math::log10(v)).collect();
    let log_linear = linear_r_squared(&logs);
    if linear.max(log_linear) < TREND_FIT_THRESHOLD {
        TrendKind::Periodic
    } else if linear > log_linear {
        TrendKind::Linear
    } else {
        TrendKind::Exponential
    }
}
