//! Base-10 mantissa/exponent decomposition and the shared y scales.
//!
//! Every renderer places values on one of two unit scales over a
//! [`MagnitudeRange`]: the pure logarithmic scale ([`log_y`]) or the
//! piecewise scale that is linear inside each decade ([`piecewise_y`]).
//! Both map `10^e_min` to 0 and `10^(e_max + 1)` to 1 and agree exactly on
//! every decade boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math;

/// Distance in log10 units below which an exponent snaps to the nearest integer.
pub const BOUNDARY_SNAP: f64 = 1e-9;

/// A positive value split as `value = mantissa * 10^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagnitudeValue {
    pub value: f64,
    pub mantissa: f64,
    pub exponent: i32,
}

impl MagnitudeValue {
    /// Fraction of the decade covered by the mantissa: 0 at m = 1, 1 at m = 10.
    pub fn mantissa_fraction(&self) -> f64 {
        (self.mantissa - 1.0) / 9.0
    }
}

/// Canonical decomposition with `1 <= mantissa < 10`.
///
/// Values within [`BOUNDARY_SNAP`] of a power of ten in log space are snapped
/// onto that power so `1000` never comes out as `9.999...e2`.
pub fn decompose(value: f64) -> Result<MagnitudeValue> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::NotPositive { value });
    }
    let log = math::log10(value);
    let nearest = math::round(log);
    let mut exponent = if math::abs(log - nearest) < BOUNDARY_SNAP {
        nearest as i32
    } else {
        math::floor(log) as i32
    };
    let mut mantissa = math::scale10(value, -exponent);
    if mantissa >= 10.0 {
        exponent += 1;
        mantissa = math::scale10(value, -exponent);
    }
    if mantissa < 1.0 {
        if 1.0 - mantissa < BOUNDARY_SNAP * 10.0 {
            mantissa = 1.0;
        } else {
            exponent -= 1;
            mantissa = math::scale10(value, -exponent);
        }
    }
    Ok(MagnitudeValue {
        value,
        mantissa,
        exponent,
    })
}

/// `mantissa * 10^exponent`. A mantissa of exactly 10 aliases `(1, exponent + 1)`.
pub fn compose(mantissa: f64, exponent: i32) -> Result<f64> {
    if !(1.0..=10.0).contains(&mantissa) {
        return Err(Error::MantissaOutOfBounds { mantissa });
    }
    Ok(math::scale10(mantissa, exponent))
}

/// Inclusive span of decades `[10^e_min, 10^(e_max + 1)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRange")]
pub struct MagnitudeRange {
    e_min: i32,
    e_max: i32,
}

#[derive(Deserialize)]
struct RawRange {
    e_min: i32,
    e_max: i32,
}

impl TryFrom<RawRange> for MagnitudeRange {
    type Error = Error;

    fn try_from(raw: RawRange) -> Result<Self> {
        MagnitudeRange::new(raw.e_min, raw.e_max)
    }
}

impl Default for MagnitudeRange {
    fn default() -> Self {
        Self::STUDY
    }
}

impl MagnitudeRange {
    /// Decades 10^0 through 10^4, i.e. values in [1, 100000].
    pub const STUDY: MagnitudeRange = MagnitudeRange { e_min: 0, e_max: 4 };

    pub fn new(e_min: i32, e_max: i32) -> Result<Self> {
        if e_min > e_max {
            return Err(Error::InvalidRange { e_min, e_max });
        }
        Ok(Self { e_min, e_max })
    }

    pub fn e_min(&self) -> i32 {
        self.e_min
    }

    pub fn e_max(&self) -> i32 {
        self.e_max
    }

    pub fn decades(&self) -> usize {
        (self.e_max - self.e_min + 1) as usize
    }

    pub fn bottom(&self) -> f64 {
        math::pow10(self.e_min)
    }

    pub fn top(&self) -> f64 {
        math::pow10(self.e_max + 1)
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.bottom() && value <= self.top()
    }

    /// Exponents covered by the range, lowest first.
    pub fn exponents(&self) -> core::ops::RangeInclusive<i32> {
        self.e_min..=self.e_max
    }

    /// Decomposition closed over the range: the range top comes back as
    /// `(10, e_max)` so its exponent stays inside the range.
    pub fn locate(&self, value: f64) -> Result<MagnitudeValue> {
        if !self.contains(value) {
            return Err(Error::OutOfRange {
                value,
                low: self.bottom(),
                high: self.top(),
            });
        }
        let mut mv = decompose(value)?;
        if mv.exponent > self.e_max {
            mv.exponent = self.e_max;
            mv.mantissa = 10.0;
        }
        Ok(mv)
    }
}

/// Position on the linear-within-decade scale, in [0, 1].
pub fn piecewise_y(value: f64, range: MagnitudeRange) -> Result<f64> {
    let mv = range.locate(value)?;
    Ok(piecewise_position(&mv, range))
}

/// Position on the logarithmic scale, in [0, 1].
pub fn log_y(value: f64, range: MagnitudeRange) -> Result<f64> {
    let mv = range.locate(value)?;
    let offset = (mv.exponent - range.e_min) as f64;
    Ok((offset + math::log10(mv.mantissa)) / range.decades() as f64)
}

pub(crate) fn piecewise_position(mv: &MagnitudeValue, range: MagnitudeRange) -> f64 {
    let offset = (mv.exponent - range.e_min) as f64;
    (offset + mv.mantissa_fraction()) / range.decades() as f64
}
